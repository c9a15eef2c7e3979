#pragma once

// Shared test scaffolding: scripted leaf behaviors and independently coded
// oracles for the classic node semantics. The oracles are deliberately
// plain case analysis over child statuses, with no engine code involved,
// so they stay a genuine second opinion.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "action_model.hpp"
#include "dsl.hpp"
#include "engine.hpp"
#include "rng.hpp"
#include "status.hpp"
#include "tree.hpp"

namespace cbt::test {

/// Plays back a fixed status script (repeating the last entry forever) and
/// counts how often it was ticked or halted.
class ScriptedAction final : public ActionModel {
public:
    explicit ScriptedAction(std::vector<Status> script, double progress = 0.0)
        : script_(std::move(script)), progress_(progress) {}

    Status tick() override {
        ++ticks;
        Status s = script_.empty()
                       ? Status::Running
                       : script_[std::min(script_.size() - 1, static_cast<std::size_t>(ticks - 1))];
        return s;
    }

    void halt() override { ++halts; }

    double progress() const override { return progress_; }
    void set_progress(double p) { progress_ = p; }

    int ticks = 0;
    int halts = 0;

private:
    std::vector<Status> script_;
    double progress_;
};

/// Scripted leaves shared between the test and the engine. Actions are
/// matched by name: "s", "r", "f" scripts a constant status; any other
/// name defaults to Running.
struct ScriptedTree {
    Document doc;
    std::unique_ptr<Engine> engine;
    std::vector<ScriptedAction*> leaves;  // in depth-first order

    /// `statuses[i]` scripts the i-th action leaf (depth-first).
    ScriptedTree(NodePtr root, std::vector<Status> statuses) {
        doc.root = std::move(root);
        doc.finalize();
        std::size_t next = 0;
        Engine::Options opts;
        opts.model_override = [&](const Node&, std::uint64_t) {
            Status s = next < statuses.size() ? statuses[next] : Status::Running;
            ++next;
            auto model = std::make_unique<ScriptedAction>(std::vector<Status>{s});
            leaves.push_back(model.get());
            return model;
        };
        engine = std::make_unique<Engine>(doc, std::move(opts));
    }
};

/// Direct case analysis of the classic operators over one cycle of child
/// statuses. `ticked_out`, when given, receives which children an ideal
/// traversal would have reached.
inline Status oracle_sequence(const std::vector<Status>& children,
                              std::vector<bool>* ticked_out = nullptr) {
    std::vector<bool> ticked(children.size(), false);
    Status result = Status::Success;
    for (std::size_t i = 0; i < children.size(); ++i) {
        ticked[i] = true;
        if (children[i] == Status::Running) {
            result = Status::Running;
            break;
        }
        if (children[i] == Status::Failure) {
            result = Status::Failure;
            break;
        }
    }
    if (ticked_out) *ticked_out = ticked;
    return result;
}

inline Status oracle_fallback(const std::vector<Status>& children,
                              std::vector<bool>* ticked_out = nullptr) {
    std::vector<bool> ticked(children.size(), false);
    Status result = Status::Failure;
    for (std::size_t i = 0; i < children.size(); ++i) {
        ticked[i] = true;
        if (children[i] == Status::Running) {
            result = Status::Running;
            break;
        }
        if (children[i] == Status::Success) {
            result = Status::Success;
            break;
        }
    }
    if (ticked_out) *ticked_out = ticked;
    return result;
}

inline Status oracle_parallel(const std::vector<Status>& children, int m) {
    int s = 0, f = 0;
    for (Status c : children) {
        s += c == Status::Success;
        f += c == Status::Failure;
    }
    int n = static_cast<int>(children.size());
    if (s >= m) return Status::Success;
    if (f > n - m) return Status::Failure;
    return Status::Running;
}

/// All 3^n status assignments for n children.
inline std::vector<std::vector<Status>> all_status_assignments(int n) {
    std::vector<std::vector<Status>> out;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    const Status options[3] = {Status::Success, Status::Running, Status::Failure};
    while (true) {
        std::vector<Status> row;
        row.reserve(digits.size());
        for (int d : digits) row.push_back(options[d]);
        out.push_back(std::move(row));
        int i = n - 1;
        while (i >= 0 && digits[static_cast<std::size_t>(i)] == 2) {
            digits[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++digits[static_cast<std::size_t>(i)];
    }
    return out;
}

inline std::vector<NodePtr> action_leaves(int n) {
    std::vector<NodePtr> out;
    for (int i = 0; i < n; ++i) out.push_back(make_action("a" + std::to_string(i)));
    return out;
}

inline Document parse_ok(const std::string& text) {
    auto result = dsl::parse(text);
    if (!result.ok())
        throw std::runtime_error("test document failed to parse: " +
                                 result.diagnostics.front().format("<test>"));
    return std::move(result.doc);
}

/// Seeded generator of valid, reference-consistent documents exercising
/// every declaration and node form. Drives the round-trip and grammar
/// ambiguity checks.
class DocumentGenerator {
public:
    explicit DocumentGenerator(std::uint64_t seed) : gen_(seed) {}

    Document next() {
        Document doc;
        int n_resources = pick(0, 3);
        for (int i = 0; i < n_resources; ++i) doc.resources.insert("res" + std::to_string(i));
        int n_groups = pick(1, 3);
        for (int i = 0; i < n_groups; ++i) {
            std::string name = "g" + std::to_string(i);
            if (pick(0, 1) == 0) {
                std::vector<double> barriers;
                int nb = pick(0, 4);
                for (int k = 1; k <= nb; ++k)
                    barriers.push_back(static_cast<double>(k) / (nb + 1));
                doc.groups.emplace(name, BarrierPolicy::absolute(std::move(barriers)));
            } else {
                doc.groups.emplace(name, BarrierPolicy::relative(pick(0, 10) / 10.0));
            }
        }
        int n_actions = pick(1, 4);
        for (int i = 0; i < n_actions; ++i) {
            ActionDecl decl;
            switch (pick(0, 3)) {
                case 0:
                    decl.kind = ActionDecl::Kind::Stochastic;
                    decl.rate = pick(1, 20) / 100.0;
                    decl.noise = pick(0, 10) / 1000.0;
                    break;
                case 1:
                    decl.kind = ActionDecl::Kind::Profile;
                    decl.rate = pick(1, 20) / 100.0;
                    break;
                case 2: decl.kind = ActionDecl::Kind::Perpetual; break;
                default:
                    decl.kind = ActionDecl::Kind::Battery;
                    decl.rate = pick(1, 20) / 100.0;
                    break;
            }
            if (decl.kind != ActionDecl::Kind::Perpetual && pick(0, 3) == 0)
                decl.start = pick(1, 9) / 10.0;
            for (const auto& r : doc.resources)
                if (pick(0, 2) == 0) decl.uses.insert(r);
            doc.actions.emplace("task" + std::to_string(i), std::move(decl));
        }
        doc.root = node(doc, 0);
        doc.finalize();
        return doc;
    }

private:
    int pick(int lo, int hi) { return lo + static_cast<int>(gen_.uniform(0, hi - lo + 1)); }

    NodePtr leaf(const Document& doc) {
        if (pick(0, 3) == 0) return make_condition("check" + std::to_string(pick(0, 2)));
        int i = pick(0, static_cast<int>(doc.actions.size()) - 1);
        auto it = doc.actions.begin();
        std::advance(it, i);
        return make_action(it->first);
    }

    NodePtr node(const Document& doc, int depth) {
        if (depth >= 3) return leaf(doc);
        switch (pick(0, 6)) {
            case 0:
            case 1: return leaf(doc);
            case 2: {
                std::vector<NodePtr> children;
                for (int i = 0, n = pick(1, 3); i < n; ++i) children.push_back(node(doc, depth + 1));
                return make_sequence(std::move(children), pick(0, 1) == 1);
            }
            case 3: {
                std::vector<NodePtr> children;
                for (int i = 0, n = pick(1, 3); i < n; ++i) children.push_back(node(doc, depth + 1));
                return make_fallback(std::move(children), pick(0, 1) == 1);
            }
            case 4: {
                std::vector<NodePtr> children;
                int n = pick(1, 3);
                for (int i = 0; i < n; ++i) children.push_back(node(doc, depth + 1));
                return make_parallel(pick(1, n), std::move(children));
            }
            case 5: {
                int i = pick(0, static_cast<int>(doc.groups.size()) - 1);
                auto it = doc.groups.begin();
                std::advance(it, i);
                return make_progress_sync(it->first, node(doc, depth + 1));
            }
            default:
                return make_resource_sync(pick(0, 1) == 0 ? 0.0 : pick(1, 3), node(doc, depth + 1));
        }
    }

    RngStream gen_;
};

}  // namespace cbt::test
