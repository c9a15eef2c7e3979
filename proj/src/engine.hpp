#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "action_model.hpp"
#include "status.hpp"
#include "sync.hpp"
#include "trace.hpp"
#include "tree.hpp"

namespace cbt {

/// Executes one tree over a finalized Document.
///
/// One cycle is a single deterministic depth-first traversal: the root is
/// ticked, every node that stopped being reached is halted afterwards, and
/// the end-of-cycle state is appended to the trace. All shared execution
/// state (blackboard flags, sync groups, the resource table, memory) lives
/// here; the Document stays immutable and can back any number of engines.
class Engine {
public:
    /// Hook for substituting leaf behaviors, used by tests to script
    /// statuses. Return nullptr to fall back to the declared model.
    using ModelFactory = std::function<std::unique_ptr<ActionModel>(
        const Node& node, std::uint64_t stream_seed)>;

    struct Options {
        std::uint64_t seed = 0;
        ModelFactory model_override;
    };

    struct RunResult {
        TickTrace trace;
        bool completed = false;
        std::uint64_t cycles = 0;
    };

    explicit Engine(const Document& doc);
    Engine(const Document& doc, Options opts);

    /// Ticks the root once and performs end-of-cycle bookkeeping.
    Status tick_cycle();

    /// Ticks until every finite action reports progress 1 (or, for trees
    /// without finite actions, until the root resolves), up to
    /// `max_cycles`. A capped-out run comes back with completed = false
    /// and the partial trace.
    RunResult run(std::uint64_t max_cycles);

    std::uint64_t cycle() const { return cycle_; }
    Status last_root_status() const { return last_[0]; }

    double node_progress(int id) const;
    std::set<std::string> node_resources(int id) const;

    bool all_finite_actions_done() const;

    const ResourceArbiter& resources() const { return arbiter_; }
    const SyncGroupRuntime& group(const std::string& name) const { return groups_.at(name); }

    ActionModel* model(int node_id) { return models_[static_cast<std::size_t>(node_id)].get(); }

    /// Node ids of every Action leaf bound to `name`, in depth-first order.
    std::vector<int> action_nodes(const std::string& name) const;

    void set_flag(const std::string& key, bool value) { flags_[key] = value; }
    bool flag(const std::string& key) const;

    const TickTrace& trace() const { return trace_; }
    TickTrace take_trace() { return std::move(trace_); }

private:
    Status tick_node(const Node& n);
    void halt_node(const Node& n);
    void begin_cycle();
    void end_cycle();
    void record_cycle();
    const Node& child_of(int decorator_id) const;

    const Document* doc_;
    std::uint64_t cycle_ = 0;

    // Per-node runtime state, indexed by node id.
    std::vector<Status> last_;
    std::vector<std::uint8_t> ticked_;
    std::vector<std::uint8_t> prev_ticked_;
    std::vector<std::uint8_t> running_;  ///< was Running at the end of last cycle
    std::vector<std::uint8_t> halted_;   ///< halted during the current cycle
    std::vector<int> frontier_;          ///< seq/fb: index where evaluation stopped
    std::vector<std::vector<std::int8_t>> memory_;  ///< memory nodes: stored child statuses
    std::vector<std::unique_ptr<ActionModel>> models_;

    std::map<std::string, SyncGroupRuntime> groups_;
    std::vector<SyncGroupRuntime*> group_of_;  ///< per node id, psync only
    ResourceArbiter arbiter_;
    std::vector<int> rsync_ids_;
    std::vector<int> finite_action_ids_;

    std::map<std::string, bool> flags_;
    TickTrace trace_;
};

}  // namespace cbt
