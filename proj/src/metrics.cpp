#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cbt {

double progress_distance(const std::vector<double>& progresses) {
    double sum = 0.0;
    for (std::size_t i = 0; i < progresses.size(); ++i)
        for (std::size_t j = i + 1; j < progresses.size(); ++j)
            sum += std::abs(progresses[i] - progresses[j]);
    return sum;
}

double mean_progress_distance(const TickTrace& trace, const std::vector<int>& member_ids) {
    if (trace.cycles.empty()) return 0.0;
    double sum = 0.0;
    std::vector<double> ps(member_ids.size());
    for (const auto& rec : trace.cycles) {
        for (std::size_t i = 0; i < member_ids.size(); ++i)
            ps[i] = rec.progress[static_cast<std::size_t>(member_ids[i])];
        sum += progress_distance(ps);
    }
    return sum / static_cast<double>(trace.cycles.size());
}

std::size_t closest_progress_cycle(const std::vector<double>& series, double target,
                                   double start) {
    if (target < 0.0 || target > 1.0)
        throw std::invalid_argument("target progress must lie in [0, 1]");
    std::size_t best_cycle = 0;
    double best = std::abs(start - target);
    for (std::size_t k = 0; k < series.size(); ++k) {
        double d = std::abs(series[k] - target);
        if (d < best) {
            best = d;
            best_cycle = k + 1;
        }
    }
    return best_cycle;
}

double predictability_distance(const std::vector<double>& series, double target,
                               double expected_cycle, double start) {
    auto reached = static_cast<double>(closest_progress_cycle(series, target, start));
    return std::abs(reached - expected_cycle);
}

SummaryStats summarize(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize needs at least one sample");
    std::sort(samples.begin(), samples.end());
    auto quantile = [&](double p) {
        double pos = p * static_cast<double>(samples.size() - 1);
        auto lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, samples.size() - 1);
        double frac = pos - static_cast<double>(lo);
        return samples[lo] + frac * (samples[hi] - samples[lo]);
    };
    SummaryStats s;
    s.n = samples.size();
    s.min = samples.front();
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.max = samples.back();
    return s;
}

}  // namespace cbt
