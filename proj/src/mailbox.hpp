#pragma once

#include <atomic>
#include <optional>

#include "action_model.hpp"

namespace cbt {

/// Single-producer single-consumer token slot of capacity one.
///
/// The ticking side deposits one token per tick; the worker side consumes
/// one token per quantum and performs a step of work, or stops when the
/// slot is empty. Depositing onto a full slot replaces the token, so
/// occupancy never exceeds one and a stale token cannot keep a worker
/// alive for more than a single quantum after ticks stop.
///
/// This is the only engine state that may be shared across execution
/// contexts; everything else is confined to the tick traversal.
class TokenMailbox {
public:
    void deposit() { token_.store(true, std::memory_order_release); }

    /// Consumes the token if present. Returns whether one was there.
    bool try_consume() { return token_.exchange(false, std::memory_order_acq_rel); }

    bool occupied() const { return token_.load(std::memory_order_acquire); }

    void drain() { token_.store(false, std::memory_order_release); }

private:
    std::atomic<bool> token_{false};
};

/// One worker-side quantum: consume a token and advance the action one
/// step, or halt it when no tick arrived since the last quantum. Returns
/// the step's status, or nothing when the action was halted instead.
///
/// With the ticker running at twice the quantum rate or faster, a token is
/// always present and the action runs uninterrupted; once ticks stop, the
/// worker halts it within a single quantum.
inline std::optional<Status> pump_quantum(ActionModel& action, TokenMailbox& mailbox) {
    if (mailbox.try_consume()) return action.tick();
    action.halt();
    return std::nullopt;
}

}  // namespace cbt
