#pragma once

#include <cstdint>
#include <memory>

#include "action_model.hpp"
#include "rng.hpp"
#include "tree.hpp"

namespace cbt {

/// Linear progress with uniform disturbance: each ticked cycle adds the
/// nominal rate plus a fresh draw from [-noise, noise], clamped to [0,1].
/// Succeeds once progress reaches 1.
class StochasticLinearAction final : public ActionModel {
public:
    StochasticLinearAction(double rate, double noise, RngStream stream, double start = 0.0)
        : rate_(rate), noise_(noise), progress_(clamp_progress(start)), stream_(stream) {}

    Status tick() override {
        if (progress_ >= 1.0) return Status::Success;
        double w = noise_ > 0.0 ? stream_.symmetric(noise_) : 0.0;
        progress_ = clamp_progress(progress_ + rate_ + w);
        return progress_ >= 1.0 ? Status::Success : Status::Running;
    }

    double progress() const override { return progress_; }

private:
    double rate_;
    double noise_;
    double progress_;
    RngStream stream_;
};

/// Deterministic schedule, typically the reference profile another action
/// is synchronized against. Constant increment per ticked cycle.
class ProfileAction final : public ActionModel {
public:
    explicit ProfileAction(double increment, double start = 0.0)
        : increment_(increment), progress_(clamp_progress(start)) {}

    Status tick() override {
        if (progress_ >= 1.0) return Status::Success;
        progress_ = clamp_progress(progress_ + increment_);
        return progress_ >= 1.0 ? Status::Success : Status::Running;
    }

    double progress() const override { return progress_; }

private:
    double increment_;
    double progress_;
};

/// An action without an intrinsic duration: progress is 1 while it is
/// being driven and 0 otherwise, and it never succeeds on its own.
class PerpetualAction final : public ActionModel {
public:
    Status tick() override {
        active_ = true;
        return Status::Running;
    }

    void halt() override { active_ = false; }

    double progress() const override { return active_ ? 1.0 : 0.0; }

    bool finite() const override { return false; }

private:
    bool active_ = false;
};

/// Charging battery: fixed increment per ticked cycle, and it needs its
/// declared cable set exactly while unfinished. The demand dropping to
/// empty at full charge is what releases the cables.
class BatteryAction final : public ActionModel {
public:
    BatteryAction(double increment, std::set<std::string> cables, double start = 0.0)
        : increment_(increment), cables_(std::move(cables)), progress_(clamp_progress(start)) {}

    Status tick() override {
        if (progress_ >= 1.0) return Status::Success;
        progress_ = clamp_progress(progress_ + increment_);
        return progress_ >= 1.0 ? Status::Success : Status::Running;
    }

    double progress() const override { return progress_; }

    const std::set<std::string>& resources() const override {
        static const std::set<std::string> none;
        return progress_ >= 1.0 ? none : cables_;
    }

private:
    double increment_;
    std::set<std::string> cables_;
    double progress_;
};

/// Instantiates the model for a declared action. `stream_seed` feeds the
/// action's private noise stream.
std::unique_ptr<ActionModel> make_model(const ActionDecl& decl, std::uint64_t stream_seed);

}  // namespace cbt
