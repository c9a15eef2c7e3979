#pragma once

#include <cstddef>
#include <vector>

#include "trace.hpp"

namespace cbt {

/// Pairwise synchronization spread of one sync group: the sum of absolute
/// progress differences over unordered member pairs. Zero iff all equal.
double progress_distance(const std::vector<double>& progresses);

/// Average of progress_distance over every recorded cycle of a run (the
/// run ends when the last member reaches 1, so that is the window).
/// `member_ids` are the group's decorator node ids.
double mean_progress_distance(const TickTrace& trace, const std::vector<int>& member_ids);

/// Cycle whose progress comes closest to `target`; earliest on ties.
/// `series[k]` is progress at the end of cycle k+1; cycle 0 (progress
/// `start`) takes part too.
std::size_t closest_progress_cycle(const std::vector<double>& series, double target,
                                   double start = 0.0);

/// Gap in cycles between when progress `target` was expected
/// (`expected_cycle`) and when the trace got closest to it.
double predictability_distance(const std::vector<double>& series, double target,
                               double expected_cycle, double start = 0.0);

/// Boxplot summary; quartiles by linear interpolation between order
/// statistics.
struct SummaryStats {
    double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
    std::size_t n = 0;
    double iqr() const { return q3 - q1; }
};

SummaryStats summarize(std::vector<double> samples);

}  // namespace cbt
