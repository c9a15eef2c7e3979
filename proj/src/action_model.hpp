#pragma once

#include <set>
#include <string>

#include "status.hpp"

namespace cbt {

/// Runtime behavior behind one Action leaf. Advances a step when ticked,
/// reports execution progress in [0,1] and the resource symbols it
/// currently needs.
class ActionModel {
public:
    virtual ~ActionModel() = default;

    /// One step of computation; called once per cycle while ticked.
    virtual Status tick() = 0;

    /// Called when the node stops receiving ticks.
    virtual void halt() {}

    virtual double progress() const = 0;

    /// Resources needed in the current state. Empty by default.
    virtual const std::set<std::string>& resources() const {
        static const std::set<std::string> none;
        return none;
    }

    /// Whether the action completes on its own. Finite actions are the
    /// ones a simulation run waits on; perpetual ones are not.
    virtual bool finite() const { return true; }
};

/// Progress arithmetic accumulates per-tick increments, so ten exact 0.1
/// steps land at 0.999... in floats; values within this slack of 1 snap to
/// 1 so completion checks and resource release trigger on the intended step.
inline double clamp_progress(double p) {
    if (p >= 1.0 - 1e-12) return 1.0;
    return p < 0.0 ? 0.0 : p;
}

}  // namespace cbt
