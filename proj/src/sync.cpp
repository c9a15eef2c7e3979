#include "sync.hpp"

#include <algorithm>
#include <stdexcept>

namespace cbt {

double absolute_barrier(const std::vector<double>& barriers,
                        const std::vector<double>& progresses) {
    if (progresses.empty()) throw std::invalid_argument("barrier over empty group");
    double lowest = *std::min_element(progresses.begin(), progresses.end());
    for (double b : barriers)
        if (lowest < b) return b;
    return barriers.back();
}

double relative_barrier(double delta, const std::vector<double>& progresses) {
    if (progresses.empty()) throw std::invalid_argument("barrier over empty group");
    return *std::min_element(progresses.begin(), progresses.end()) + delta;
}

void SyncGroupRuntime::add_member(int node_id) {
    members_.push_back(node_id);
    progresses_.push_back(0.0);
}

void SyncGroupRuntime::set_progress(int node_id, double p) {
    for (std::size_t i = 0; i < members_.size(); ++i) {
        if (members_[i] == node_id) {
            progresses_[i] = p;
            return;
        }
    }
    throw std::invalid_argument("node is not a member of this sync group");
}

double SyncGroupRuntime::barrier() const {
    return policy_.kind == BarrierPolicy::Kind::Absolute
               ? absolute_barrier(policy_.barriers, progresses_)
               : relative_barrier(policy_.delta, progresses_);
}

void ResourceArbiter::declare(const std::set<std::string>& universe) {
    universe_.assign(universe.begin(), universe.end());
}

void ResourceArbiter::begin_cycle(const std::vector<Demand>& demands) {
    winner_.clear();
    granted_.clear();
    contested_.clear();

    // Highest priority wins each resource; ties go to the smallest id.
    auto beats = [this](int a, int b) {
        double pa = priority(a), pb = priority(b);
        return pa > pb || (pa == pb && a < b);
    };
    for (const auto& d : demands) {
        contested_.insert(d.node_id);
        for (const auto& q : d.needs) {
            auto it = winner_.find(q);
            if (it == winner_.end() || beats(d.node_id, it->second)) winner_[q] = d.node_id;
        }
    }
    for (const auto& d : demands) {
        bool all = true;
        for (const auto& q : d.needs)
            if (winner_.at(q) != d.node_id) {
                all = false;
                break;
            }
        if (all) granted_.insert(d.node_id);
    }
}

bool ResourceArbiter::granted(int node_id, const std::set<std::string>& needs) const {
    if (contested_.count(node_id)) return granted_.count(node_id) > 0;
    // Not part of this cycle's contest (first time reached): it may take
    // only resources that are free and that no contender was awarded.
    for (const auto& q : needs) {
        if (winner_.count(q)) return false;
        auto it = held_.find(q);
        if (it != held_.end() && it->second != node_id) return false;
    }
    return true;
}

void ResourceArbiter::acquire(int node_id, const std::set<std::string>& needs) {
    for (const auto& q : needs) held_[q] = node_id;
}

void ResourceArbiter::release_all(int node_id) {
    for (auto it = held_.begin(); it != held_.end();)
        it = it->second == node_id ? held_.erase(it) : std::next(it);
}

double ResourceArbiter::priority(int node_id) const {
    auto it = priority_.find(node_id);
    return it == priority_.end() ? 0.0 : it->second;
}

void ResourceArbiter::bump_priority(int node_id, double increment) {
    priority_[node_id] += increment;
}

void ResourceArbiter::reset_priority(int node_id) { priority_[node_id] = 0.0; }

std::optional<int> ResourceArbiter::holder(const std::string& resource) const {
    auto it = held_.find(resource);
    if (it == held_.end()) return std::nullopt;
    return it->second;
}

}  // namespace cbt
