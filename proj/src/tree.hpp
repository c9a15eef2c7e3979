#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace cbt {

/// Position of a construct in its source file. Parse diagnostics and the
/// static conflict lint anchor to these.
struct SourceSpan {
    int line = 0;
    int column = 0;
    std::size_t offset = 0;
};

enum class NodeKind {
    Sequence,
    Fallback,
    Parallel,
    MemorySequence,
    MemoryFallback,
    ProgressSync,
    ResourceSync,
    Action,
    Condition,
};

std::string_view to_string(NodeKind k);

/// One tree node. Arity is validated by the builder functions below so the
/// tick path never has to.
struct Node {
    NodeKind kind{};
    int id = -1;  ///< dense depth-first index, assigned by Document::finalize
    int parallel_m = 0;               ///< Parallel: success threshold M
    std::string group;                ///< ProgressSync: sync-group name
    double priority_increment = 0.0;  ///< ResourceSync: per-denied-cycle priority gain
    std::string name;                 ///< Action: model binding; Condition: predicate key
    std::vector<std::unique_ptr<Node>> children;
    SourceSpan span;

    bool is_memory() const {
        return kind == NodeKind::MemorySequence || kind == NodeKind::MemoryFallback;
    }
    bool is_decorator() const {
        return kind == NodeKind::ProgressSync || kind == NodeKind::ResourceSync;
    }
    bool is_leaf() const { return kind == NodeKind::Action || kind == NodeKind::Condition; }
};

using NodePtr = std::unique_ptr<Node>;

// Builders. All throw std::invalid_argument on arity violations.
NodePtr make_sequence(std::vector<NodePtr> children, bool memory = false);
NodePtr make_fallback(std::vector<NodePtr> children, bool memory = false);
NodePtr make_parallel(int m, std::vector<NodePtr> children);
NodePtr make_progress_sync(std::string group, NodePtr child);
NodePtr make_resource_sync(double priority_increment, NodePtr child);
NodePtr make_action(std::string name);
NodePtr make_condition(std::string name);

/// Barrier computation policy of one sync group.
struct BarrierPolicy {
    enum class Kind { Absolute, Relative };
    Kind kind = Kind::Relative;
    /// Absolute: strictly ascending values in (0,1]; a sentinel 1.0 is
    /// appended when absent so completion never deadlocks. An empty list
    /// therefore degenerates to {1.0}, which gates nothing.
    std::vector<double> barriers;
    double delta = 1.0;  ///< Relative: lag threshold in [0,1]; 1 gates nothing.

    static BarrierPolicy absolute(std::vector<double> barriers);
    static BarrierPolicy relative(double delta);

    bool operator==(const BarrierPolicy&) const = default;
};

/// Declared leaf behavior model.
struct ActionDecl {
    enum class Kind { Stochastic, Profile, Perpetual, Battery };
    Kind kind = Kind::Stochastic;
    double rate = 0.0;    ///< nominal per-tick progress increment
    double noise = 0.0;   ///< uniform noise half-width
    double start = 0.0;   ///< initial progress
    std::set<std::string> uses;  ///< resource symbols needed while unfinished

    bool operator==(const ActionDecl&) const = default;
};

/// A parsed tree file: declarations plus the root expression.
struct Document {
    std::set<std::string> resources;
    std::map<std::string, BarrierPolicy> groups;
    std::map<std::string, ActionDecl> actions;
    NodePtr root;

    /// Assigns dense depth-first ids and builds the id -> node index.
    void finalize();

    int node_count() const { return static_cast<int>(flat_.size()); }
    const Node& node(int id) const { return *flat_[static_cast<std::size_t>(id)]; }
    const std::vector<const Node*>& nodes() const { return flat_; }

private:
    std::vector<const Node*> flat_;
};

bool structurally_equal(const Node& a, const Node& b);
bool structurally_equal(const Document& a, const Document& b);

NodePtr clone(const Node& n);

}  // namespace cbt
