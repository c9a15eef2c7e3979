#include "engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "models.hpp"
#include "rng.hpp"

namespace cbt {

Engine::Engine(const Document& doc) : Engine(doc, Options{}) {}

Engine::Engine(const Document& doc, Options opts) : doc_(&doc) {
    if (doc.node_count() == 0)
        throw std::invalid_argument("document not finalized (call Document::finalize)");
    const auto n = static_cast<std::size_t>(doc.node_count());

    last_.assign(n, Status::Running);
    ticked_.assign(n, 0);
    prev_ticked_.assign(n, 0);
    running_.assign(n, 0);
    halted_.assign(n, 0);
    frontier_.assign(n, 0);
    memory_.resize(n);
    models_.resize(n);
    group_of_.assign(n, nullptr);

    for (const auto& [name, policy] : doc.groups) groups_.emplace(name, SyncGroupRuntime(policy));
    arbiter_.declare(doc.resources);

    // Action noise streams are keyed by the leaf's ordinal among actions,
    // not by node id, so inserting or deleting decorators above a leaf
    // does not shift its draws.
    int action_ordinal = 0;
    for (const Node* node : doc.nodes()) {
        const auto id = static_cast<std::size_t>(node->id);
        switch (node->kind) {
            case NodeKind::Action: {
                std::uint64_t stream_seed =
                    combine_seed(opts.seed, 0xAC710Full + static_cast<std::uint64_t>(action_ordinal));
                ++action_ordinal;
                if (opts.model_override) models_[id] = opts.model_override(*node, stream_seed);
                if (!models_[id]) {
                    auto it = doc.actions.find(node->name);
                    if (it == doc.actions.end())
                        throw std::invalid_argument("undeclared action model: " + node->name);
                    models_[id] = make_model(it->second, stream_seed);
                }
                if (models_[id]->finite()) finite_action_ids_.push_back(node->id);
                break;
            }
            case NodeKind::ProgressSync: {
                auto it = groups_.find(node->group);
                if (it == groups_.end())
                    throw std::invalid_argument("undeclared sync group: " + node->group);
                it->second.add_member(node->id);
                group_of_[id] = &it->second;
                break;
            }
            case NodeKind::ResourceSync: {
                rsync_ids_.push_back(node->id);
                break;
            }
            case NodeKind::MemorySequence:
            case NodeKind::MemoryFallback:
                memory_[id].assign(node->children.size(), -1);
                break;
            default: break;
        }
    }

    for (const Node* node : doc.nodes()) {
        std::string label(to_string(node->kind));
        if (!node->name.empty()) label += ":" + node->name;
        trace_.node_labels.push_back(std::move(label));
    }
    trace_.resource_names = arbiter_.universe();
    trace_.seed = opts.seed;

    // Start-of-run group values (actions may start above zero).
    for (auto& [name, g] : groups_)
        for (int m : g.members()) g.set_progress(m, node_progress(child_of(m).id));
}

const Node& Engine::child_of(int decorator_id) const {
    return *doc_->node(decorator_id).children.front();
}

bool Engine::flag(const std::string& key) const {
    auto it = flags_.find(key);
    return it != flags_.end() && it->second;
}

std::vector<int> Engine::action_nodes(const std::string& name) const {
    std::vector<int> out;
    for (const Node* node : doc_->nodes())
        if (node->kind == NodeKind::Action && node->name == name) out.push_back(node->id);
    return out;
}

double Engine::node_progress(int id) const {
    const Node& n = doc_->node(id);
    const auto count = n.children.size();
    switch (n.kind) {
        case NodeKind::Action: return models_[static_cast<std::size_t>(id)]->progress();
        case NodeKind::Condition: return 0.0;
        case NodeKind::Sequence:
        case NodeKind::MemorySequence: {
            // Completed prefix plus the active child's share.
            int f = frontier_[static_cast<std::size_t>(id)];
            if (f >= static_cast<int>(count)) return 1.0;
            return (f + node_progress(n.children[static_cast<std::size_t>(f)]->id)) /
                   static_cast<double>(count);
        }
        case NodeKind::Fallback:
        case NodeKind::MemoryFallback: {
            int f = std::min(frontier_[static_cast<std::size_t>(id)],
                             static_cast<int>(count) - 1);
            return node_progress(n.children[static_cast<std::size_t>(f)]->id);
        }
        case NodeKind::Parallel: {
            double lowest = 1.0;
            for (const auto& c : n.children) lowest = std::min(lowest, node_progress(c->id));
            return lowest;
        }
        case NodeKind::ProgressSync:
        case NodeKind::ResourceSync: return node_progress(n.children.front()->id);
    }
    return 0.0;
}

std::set<std::string> Engine::node_resources(int id) const {
    const Node& n = doc_->node(id);
    switch (n.kind) {
        case NodeKind::Action: return models_[static_cast<std::size_t>(id)]->resources();
        case NodeKind::Condition: return {};
        case NodeKind::Sequence:
        case NodeKind::MemorySequence:
        case NodeKind::Fallback:
        case NodeKind::MemoryFallback: {
            int f = std::min(frontier_[static_cast<std::size_t>(id)],
                             static_cast<int>(n.children.size()) - 1);
            return node_resources(n.children[static_cast<std::size_t>(f)]->id);
        }
        case NodeKind::Parallel: {
            std::set<std::string> all;
            for (const auto& c : n.children) {
                auto sub = node_resources(c->id);
                all.insert(sub.begin(), sub.end());
            }
            return all;
        }
        case NodeKind::ProgressSync:
        case NodeKind::ResourceSync: return node_resources(n.children.front()->id);
    }
    return {};
}

Status Engine::tick_node(const Node& n) {
    const auto id = static_cast<std::size_t>(n.id);
    ticked_[id] = 1;
    Status st = Status::Running;

    switch (n.kind) {
        case NodeKind::Sequence: {
            st = Status::Success;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                frontier_[id] = static_cast<int>(i);
                Status cs = tick_node(*n.children[i]);
                if (cs != Status::Success) {
                    st = cs;
                    break;
                }
                if (i + 1 == n.children.size()) frontier_[id] = static_cast<int>(n.children.size());
            }
            break;
        }
        case NodeKind::Fallback: {
            st = Status::Failure;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                frontier_[id] = static_cast<int>(i);
                Status cs = tick_node(*n.children[i]);
                if (cs != Status::Failure) {
                    st = cs;
                    break;
                }
            }
            break;
        }
        case NodeKind::MemorySequence: {
            auto& mem = memory_[id];
            st = Status::Success;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (mem[i] == static_cast<std::int8_t>(Status::Success)) continue;
                frontier_[id] = static_cast<int>(i);
                Status cs = tick_node(*n.children[i]);
                if (cs == Status::Running) {
                    st = Status::Running;
                    break;
                }
                if (cs == Status::Failure) {
                    st = Status::Failure;
                    break;
                }
                mem[i] = static_cast<std::int8_t>(Status::Success);
            }
            if (st != Status::Running) {
                mem.assign(n.children.size(), -1);  // cleared at the moment of return
                if (st == Status::Success) frontier_[id] = static_cast<int>(n.children.size());
            }
            break;
        }
        case NodeKind::MemoryFallback: {
            auto& mem = memory_[id];
            st = Status::Failure;
            for (std::size_t i = 0; i < n.children.size(); ++i) {
                if (mem[i] == static_cast<std::int8_t>(Status::Failure)) continue;
                frontier_[id] = static_cast<int>(i);
                Status cs = tick_node(*n.children[i]);
                if (cs == Status::Running) {
                    st = Status::Running;
                    break;
                }
                if (cs == Status::Success) {
                    st = Status::Success;
                    break;
                }
                mem[i] = static_cast<std::int8_t>(Status::Failure);
            }
            if (st != Status::Running) mem.assign(n.children.size(), -1);
            break;
        }
        case NodeKind::Parallel: {
            int successes = 0, failures = 0;
            for (const auto& c : n.children) {
                Status cs = tick_node(*c);
                successes += cs == Status::Success;
                failures += cs == Status::Failure;
            }
            const int total = static_cast<int>(n.children.size());
            if (successes >= n.parallel_m) st = Status::Success;
            else if (failures > total - n.parallel_m) st = Status::Failure;
            else st = Status::Running;
            if (st != Status::Running) {
                // Resolved: children still running are cut off now rather
                // than left to starve of ticks.
                for (const auto& c : n.children)
                    if (last_[static_cast<std::size_t>(c->id)] == Status::Running) halt_node(*c);
            }
            break;
        }
        case NodeKind::ProgressSync: {
            SyncGroupRuntime& g = *group_of_[id];
            const Node& child = *n.children.front();
            double p = node_progress(child.id);
            g.set_progress(n.id, p);
            if (p <= g.barrier() + kProgressSlack) {
                st = tick_node(child);
                g.set_progress(n.id, node_progress(child.id));
            } else {
                st = Status::Running;  // gated; the child is not ticked
            }
            break;
        }
        case NodeKind::ResourceSync: {
            const Node& child = *n.children.front();
            auto needs = node_resources(child.id);
            if (needs.empty()) {
                arbiter_.release_all(n.id);
                st = tick_node(child);
            } else if (arbiter_.granted(n.id, needs)) {
                arbiter_.release_all(n.id);  // anything no longer needed
                arbiter_.acquire(n.id, needs);
                arbiter_.reset_priority(n.id);
                st = tick_node(child);
            } else {
                // Denied: hold nothing while waiting, age the priority.
                arbiter_.release_all(n.id);
                arbiter_.bump_priority(n.id, n.priority_increment);
                st = Status::Running;
            }
            break;
        }
        case NodeKind::Action: st = models_[id]->tick(); break;
        case NodeKind::Condition: st = flag(n.name) ? Status::Success : Status::Failure; break;
    }

    last_[id] = st;
    return st;
}

void Engine::halt_node(const Node& n) {
    const auto id = static_cast<std::size_t>(n.id);
    halted_[id] = 1;
    running_[id] = 0;
    if (n.kind == NodeKind::Action && models_[id]) models_[id]->halt();
    if (n.kind == NodeKind::ResourceSync) arbiter_.release_all(n.id);
    for (const auto& c : n.children) halt_node(*c);
}

void Engine::begin_cycle() {
    std::fill(ticked_.begin(), ticked_.end(), 0);
    std::fill(halted_.begin(), halted_.end(), 0);

    // Resource contest of the cycle: every decorator reached last cycle
    // that still needs something contends; verdicts are fixed before the
    // traversal so sibling order cannot skew the allocation.
    std::vector<ResourceArbiter::Demand> demands;
    for (int rid : rsync_ids_) {
        if (!prev_ticked_[static_cast<std::size_t>(rid)]) continue;
        auto needs = node_resources(child_of(rid).id);
        if (!needs.empty()) demands.push_back({rid, std::move(needs)});
    }
    arbiter_.begin_cycle(demands);
}

void Engine::end_cycle() {
    // Nodes running last cycle that went unreached stop now. Ids are in
    // depth-first order, so a subtree's root is swept before (and marks)
    // its descendants.
    for (int id = 0; id < doc_->node_count(); ++id) {
        const auto i = static_cast<std::size_t>(id);
        if (running_[i] && !ticked_[i] && !halted_[i]) halt_node(doc_->node(id));
    }
    for (auto& [name, g] : groups_)
        for (int m : g.members()) g.set_progress(m, node_progress(child_of(m).id));
    for (int id = 0; id < doc_->node_count(); ++id) {
        const auto i = static_cast<std::size_t>(id);
        running_[i] = ticked_[i] && !halted_[i] && last_[i] == Status::Running;
    }
    prev_ticked_ = ticked_;
    record_cycle();
}

void Engine::record_cycle() {
    CycleRecord r;
    const auto n = static_cast<std::size_t>(doc_->node_count());
    r.status.resize(n);
    r.progress.resize(n);
    r.ticked = ticked_;
    for (std::size_t i = 0; i < n; ++i) {
        r.status[i] = ticked_[i] ? static_cast<std::int8_t>(last_[i]) : std::int8_t{-1};
        r.progress[i] = node_progress(static_cast<int>(i));
    }
    r.holder.reserve(arbiter_.universe().size());
    for (const auto& q : arbiter_.universe()) r.holder.push_back(arbiter_.holder(q).value_or(-1));
    trace_.cycles.push_back(std::move(r));
}

Status Engine::tick_cycle() {
    ++cycle_;
    begin_cycle();
    Status st = tick_node(doc_->node(0));
    end_cycle();
    return st;
}

bool Engine::all_finite_actions_done() const {
    for (int id : finite_action_ids_)
        if (models_[static_cast<std::size_t>(id)]->progress() < 1.0) return false;
    return true;
}

Engine::RunResult Engine::run(std::uint64_t max_cycles) {
    RunResult out;
    const bool watch_actions = !finite_action_ids_.empty();
    if (watch_actions && all_finite_actions_done()) {
        out.completed = true;
        out.cycles = 0;
        out.trace = take_trace();
        out.trace.completed = true;
        return out;
    }
    for (std::uint64_t k = 0; k < max_cycles; ++k) {
        Status st = tick_cycle();
        if (watch_actions ? all_finite_actions_done() : st != Status::Running) {
            out.completed = true;
            break;
        }
    }
    out.cycles = cycle_;
    out.trace = take_trace();
    out.trace.completed = out.completed;
    return out;
}

}  // namespace cbt
