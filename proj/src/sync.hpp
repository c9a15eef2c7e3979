#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tree.hpp"

namespace cbt {

/// Slack for progress-versus-barrier comparisons. Progress values are
/// accumulated sums, so two actions that have covered the same ground can
/// differ by a few ulps; a tie must still count as a tie or zero-slack
/// groups deadlock into double steps. Far below any meaningful progress
/// quantum, far above accumulation error.
inline constexpr double kProgressSlack = 1e-9;

/// Current barrier of an absolute policy: the smallest barrier the whole
/// group has not yet cleared, i.e. the first value strictly above the
/// minimum progress. `barriers` must be ascending and carry the 1.0
/// sentinel (BarrierPolicy::absolute guarantees both). Once every member
/// is done the sentinel is returned, which gates nothing.
double absolute_barrier(const std::vector<double>& barriers,
                        const std::vector<double>& progresses);

/// Current barrier of a relative policy: minimum progress plus the lag
/// threshold. Not clamped; values above 1 simply never gate.
double relative_barrier(double delta, const std::vector<double>& progresses);

/// Shared barrier state of one named sync group. Holds the most recent
/// progress of every member decorator's child; members read and refresh
/// their own entry as the traversal reaches them, so a decorator sees
/// fresh values for members already visited this cycle and last cycle's
/// values for the rest.
class SyncGroupRuntime {
public:
    SyncGroupRuntime() = default;
    explicit SyncGroupRuntime(BarrierPolicy policy) : policy_(std::move(policy)) {}

    void add_member(int node_id);
    void set_progress(int node_id, double p);
    double barrier() const;

    const std::vector<int>& members() const { return members_; }
    const std::vector<double>& progresses() const { return progresses_; }
    const BarrierPolicy& policy() const { return policy_; }

private:
    BarrierPolicy policy_;
    std::vector<int> members_;
    std::vector<double> progresses_;
};

/// Tree-wide allocation of exclusive resources among ResourceSync
/// decorators, with priority aging.
///
/// Holdings are re-contested once per cycle: begin_cycle collects the
/// demands of every decorator that was ticked last cycle, awards each
/// resource to the highest-priority contender (ties to the smallest node
/// id, i.e. leftmost), and a contender is granted only when it wins every
/// resource it needs. Verdicts are fixed before the traversal starts, so
/// the outcome does not depend on sibling order. A decorator reached for
/// the first time mid-cycle may still pick up resources nobody contested.
///
/// Priorities age by the decorator's increment on every denied cycle and
/// reset to zero on acquisition; with a positive increment every waiter
/// eventually outranks the field, which is what makes the scheme
/// starvation-free.
class ResourceArbiter {
public:
    void declare(const std::set<std::string>& universe);

    struct Demand {
        int node_id;
        std::set<std::string> needs;
    };

    /// Resolves this cycle's contest. `demands` lists the live decorators
    /// (ticked last cycle) with non-empty requirements.
    void begin_cycle(const std::vector<Demand>& demands);

    /// Whether `node_id` may hold `needs` this cycle.
    bool granted(int node_id, const std::set<std::string>& needs) const;

    void acquire(int node_id, const std::set<std::string>& needs);
    void release_all(int node_id);

    double priority(int node_id) const;
    void bump_priority(int node_id, double increment);
    void reset_priority(int node_id);

    std::optional<int> holder(const std::string& resource) const;
    const std::vector<std::string>& universe() const { return universe_; }

private:
    std::vector<std::string> universe_;
    std::map<std::string, int> held_;        // resource -> current holder
    std::map<std::string, int> winner_;      // this cycle's contest winner
    std::set<int> granted_;                  // contenders that won all they need
    std::set<int> contested_;                // node ids that took part in the contest
    std::map<int, double> priority_;
};

}  // namespace cbt
