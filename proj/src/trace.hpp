#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbt {

/// End-of-cycle observation of the whole tree: per-node status (or "not
/// ticked"), per-node progress, and who holds each resource.
struct CycleRecord {
    std::vector<std::int8_t> status;   ///< per node id; -1 when not ticked
    std::vector<std::uint8_t> ticked;  ///< per node id
    std::vector<double> progress;      ///< per node id
    std::vector<int> holder;           ///< per resource index; -1 when free
};

/// Full per-cycle record of one run, the input to metrics and CSV output.
struct TickTrace {
    std::vector<std::string> node_labels;     ///< per node id
    std::vector<std::string> resource_names;  ///< column order of CycleRecord::holder
    std::vector<CycleRecord> cycles;          ///< cycle k is cycles[k-1]
    bool completed = false;
    std::uint64_t seed = 0;

    std::size_t cycle_count() const { return cycles.size(); }

    /// Progress of `node_id` at the end of each cycle, cycles 1..K.
    std::vector<double> progress_series(int node_id) const {
        std::vector<double> out;
        out.reserve(cycles.size());
        for (const auto& c : cycles) out.push_back(c.progress[static_cast<std::size_t>(node_id)]);
        return out;
    }
};

}  // namespace cbt
