#include "tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbt {

std::string_view to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Sequence: return "seq";
        case NodeKind::Fallback: return "fb";
        case NodeKind::Parallel: return "par";
        case NodeKind::MemorySequence: return "seq*";
        case NodeKind::MemoryFallback: return "fb*";
        case NodeKind::ProgressSync: return "psync";
        case NodeKind::ResourceSync: return "rsync";
        case NodeKind::Action: return "act";
        case NodeKind::Condition: return "cond";
    }
    return "?";
}

namespace {

NodePtr make_composite(NodeKind kind, std::vector<NodePtr> children) {
    if (children.empty())
        throw std::invalid_argument(std::string(to_string(kind)) + " needs at least one child");
    auto n = std::make_unique<Node>();
    n->kind = kind;
    n->children = std::move(children);
    return n;
}

}  // namespace

NodePtr make_sequence(std::vector<NodePtr> children, bool memory) {
    return make_composite(memory ? NodeKind::MemorySequence : NodeKind::Sequence,
                          std::move(children));
}

NodePtr make_fallback(std::vector<NodePtr> children, bool memory) {
    return make_composite(memory ? NodeKind::MemoryFallback : NodeKind::Fallback,
                          std::move(children));
}

NodePtr make_parallel(int m, std::vector<NodePtr> children) {
    if (children.empty()) throw std::invalid_argument("par needs at least one child");
    if (m < 1 || m > static_cast<int>(children.size()))
        throw std::invalid_argument("par threshold M must satisfy 1 <= M <= #children");
    auto n = make_composite(NodeKind::Parallel, std::move(children));
    n->parallel_m = m;
    return n;
}

NodePtr make_progress_sync(std::string group, NodePtr child) {
    if (!child) throw std::invalid_argument("psync needs exactly one child");
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::ProgressSync;
    n->group = std::move(group);
    n->children.push_back(std::move(child));
    return n;
}

NodePtr make_resource_sync(double priority_increment, NodePtr child) {
    if (!child) throw std::invalid_argument("rsync needs exactly one child");
    if (priority_increment < 0)
        throw std::invalid_argument("rsync priority increment must be >= 0");
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::ResourceSync;
    n->priority_increment = priority_increment;
    n->children.push_back(std::move(child));
    return n;
}

NodePtr make_action(std::string name) {
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Action;
    n->name = std::move(name);
    return n;
}

NodePtr make_condition(std::string name) {
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Condition;
    n->name = std::move(name);
    return n;
}

BarrierPolicy BarrierPolicy::absolute(std::vector<double> barriers) {
    if (!std::is_sorted(barriers.begin(), barriers.end(),
                        [](double a, double b) { return a <= b; }))
        throw std::invalid_argument("absolute barriers must be strictly ascending");
    for (double b : barriers)
        if (b <= 0.0 || b > 1.0)
            throw std::invalid_argument("absolute barriers must lie in (0, 1]");
    if (barriers.empty() || barriers.back() < 1.0) barriers.push_back(1.0);
    BarrierPolicy p;
    p.kind = Kind::Absolute;
    p.barriers = std::move(barriers);
    return p;
}

BarrierPolicy BarrierPolicy::relative(double delta) {
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("relative threshold must lie in [0, 1]");
    BarrierPolicy p;
    p.kind = Kind::Relative;
    p.delta = delta;
    return p;
}

namespace {

void assign_ids(Node& n, int& next, std::vector<const Node*>& flat) {
    n.id = next++;
    flat.push_back(&n);
    for (auto& c : n.children) assign_ids(*c, next, flat);
}

}  // namespace

void Document::finalize() {
    flat_.clear();
    if (!root) throw std::invalid_argument("document has no root node");
    int next = 0;
    assign_ids(*root, next, flat_);
}

bool structurally_equal(const Node& a, const Node& b) {
    if (a.kind != b.kind || a.parallel_m != b.parallel_m || a.group != b.group ||
        a.priority_increment != b.priority_increment || a.name != b.name ||
        a.children.size() != b.children.size())
        return false;
    for (std::size_t i = 0; i < a.children.size(); ++i)
        if (!structurally_equal(*a.children[i], *b.children[i])) return false;
    return true;
}

bool structurally_equal(const Document& a, const Document& b) {
    if (a.resources != b.resources || a.groups != b.groups || a.actions != b.actions)
        return false;
    if (!a.root != !b.root) return false;
    return !a.root || structurally_equal(*a.root, *b.root);
}

NodePtr clone(const Node& n) {
    auto c = std::make_unique<Node>();
    c->kind = n.kind;
    c->parallel_m = n.parallel_m;
    c->group = n.group;
    c->priority_increment = n.priority_increment;
    c->name = n.name;
    c->span = n.span;
    for (const auto& ch : n.children) c->children.push_back(clone(*ch));
    return c;
}

}  // namespace cbt
