#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "trace.hpp"
#include "tree.hpp"

namespace cbt {

/// One Monte-Carlo study: a named tree family, a parameter grid, a run
/// count, and a master seed. The same spec and master seed always produce
/// byte-identical CSV output.
///
/// Per-run seeds are a pure function of (master seed, noise-axis index,
/// run index): cells that differ only in synchronization level share their
/// random streams, which keeps completion-time and distance comparisons
/// across sync levels paired run for run.
struct ExperimentSpec {
    std::string name;
    std::uint64_t runs = 10000;
    std::uint64_t master_seed = 0;
    /// Overrides of the default grids; keys: barriers, delta, omega,
    /// children, pbar.
    std::map<std::string, std::vector<double>> grid;
};

/// Grid coordinates of a cell. NaN marks axes an experiment does not use.
struct CellKey {
    double barriers = std::numeric_limits<double>::quiet_NaN();
    double delta = std::numeric_limits<double>::quiet_NaN();
    double omega = std::numeric_limits<double>::quiet_NaN();
    double children = std::numeric_limits<double>::quiet_NaN();
    double pbar = std::numeric_limits<double>::quiet_NaN();
};

struct RunRow {
    std::uint64_t run = 0;
    std::uint64_t seed = 0;
    double value = 0.0;            ///< mean progress distance, or P(pbar)
    std::uint64_t completion = 0;  ///< cycles until every action finished
};

struct CellResult {
    CellKey key;
    std::uint64_t sim_cell = 0;  ///< index the per-run seeds derive from
    std::vector<RunRow> rows;
    SummaryStats stats;
};

struct ExperimentResult {
    std::string name;
    std::vector<CellResult> cells;          ///< grid order
    std::optional<TickTrace> trace;         ///< dining experiments only
};

/// Known names: absolute, relative, scaling-absolute, scaling-relative,
/// predictability, dining-greedy, dining-fair. Throws std::invalid_argument
/// for anything else and AbortedRun when a run hits its cycle cap.
ExperimentResult run_experiment(const ExperimentSpec& spec);

std::string runs_csv(const ExperimentResult& r);
std::string summary_csv(const ExperimentResult& r);

/// Writes <name>_runs.csv and <name>_summary.csv (plus <name>_trace.csv
/// when a trace is present) into `out_dir`. Returns the paths written.
std::vector<std::string> write_experiment(const ExperimentResult& r, const std::string& out_dir);

/// Parses "key=v1,v2;key=v3" grid override syntax (the CLI's --grid).
std::map<std::string, std::vector<double>> parse_grid_overrides(const std::string& text);

// Tree-file text behind each experiment, exposed so tests can run the
// exact same documents (and their decorator-free counterparts).
std::string absolute_sweep_doc(int barrier_count, double omega, bool decorated = true);
std::string relative_sweep_doc(double delta, double omega, bool decorated = true);
std::string scaling_doc(bool absolute, int children, double omega);
std::string predictability_doc(double delta, double omega);
std::string dining_doc(bool fair);

/// Barriers at k/(n+1) for k = 1..n; the parsed policy appends the 1.0
/// sentinel itself.
std::vector<double> equidistant_barriers(int n);

/// Parses generated experiment text; throws on any diagnostic since these
/// documents are produced in-process.
Document parse_experiment_doc(const std::string& text);

/// Per-cycle expectation of the predictability reference (0.1/cycle).
double predictability_expected_cycle(double pbar);

}  // namespace cbt
