#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "engine.hpp"
#include "tree.hpp"

namespace cbt {

/// Raised when a run hits its cycle cap without completing; carries the
/// partial trace so the caller can see where it livelocked.
struct AbortedRun : std::runtime_error {
    AbortedRun(std::string what, TickTrace partial)
        : std::runtime_error(std::move(what)), trace(std::move(partial)) {}
    TickTrace trace;
};

/// Generous default cap: ten times the slowest finite action's nominal
/// duration. Catches livelock without clipping legitimate runs.
std::uint64_t default_cycle_cap(const Document& doc);

/// Executes one run: cycles until every finite action's progress reaches 1
/// (trees without finite actions run until the root resolves). Throws
/// AbortedRun past the cap.
TickTrace run_once(const Document& doc, std::uint64_t seed, std::uint64_t max_cycles = 0);

/// Writes the per-cycle trace as CSV: one row per (cycle, node) and one
/// per (cycle, resource).
void write_trace_csv(const TickTrace& trace, const std::string& path);
std::string trace_csv(const TickTrace& trace);

}  // namespace cbt
