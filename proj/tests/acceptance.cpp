// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Heavier statistical checks run on fixed master seeds so results are
// reproducible run to run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "experiments.hpp"
#include "helpers.hpp"
#include "metrics.hpp"
#include "sim.hpp"

using namespace cbt;
using namespace cbt::test;

namespace {

constexpr std::uint64_t kMasterSeed = 20250809;

struct Checker {
    bool ok = true;
    std::ostringstream detail;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            detail << (detail.tellp() > 0 ? "; " : "") << what;
        }
    }
};

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double cell_median(const ExperimentResult& r, std::function<bool(const CellKey&)> match) {
    for (const auto& cell : r.cells)
        if (match(cell.key)) return cell.stats.median;
    throw std::logic_error("no cell matched");
}

const CellResult& find_cell(const ExperimentResult& r,
                            std::function<bool(const CellKey&)> match) {
    for (const auto& cell : r.cells)
        if (match(cell.key)) return cell;
    throw std::logic_error("no cell matched");
}

double mean_completion(const CellResult& cell) {
    double sum = 0.0;
    for (const auto& row : cell.rows) sum += static_cast<double>(row.completion);
    return sum / static_cast<double>(cell.rows.size());
}

// ---------------------------------------------------------------------
// 1. Classic node semantics against the exhaustive brute-force oracle.
bool criterion_node_oracle(std::string& detail) {
    Checker c;
    long cases = 0;
    for (int n = 1; n <= 4; ++n) {
        for (const auto& statuses : all_status_assignments(n)) {
            {
                ScriptedTree t(make_sequence(action_leaves(n)), statuses);
                std::vector<bool> expect_ticked;
                Status expected = oracle_sequence(statuses, &expect_ticked);
                c.require(t.engine->tick_cycle() == expected, "sequence status mismatch");
                for (int i = 0; i < n; ++i)
                    c.require(t.leaves[static_cast<std::size_t>(i)]->ticks ==
                                  (expect_ticked[static_cast<std::size_t>(i)] ? 1 : 0),
                              "sequence tick-set mismatch");
            }
            {
                ScriptedTree t(make_fallback(action_leaves(n)), statuses);
                std::vector<bool> expect_ticked;
                Status expected = oracle_fallback(statuses, &expect_ticked);
                c.require(t.engine->tick_cycle() == expected, "fallback status mismatch");
                for (int i = 0; i < n; ++i)
                    c.require(t.leaves[static_cast<std::size_t>(i)]->ticks ==
                                  (expect_ticked[static_cast<std::size_t>(i)] ? 1 : 0),
                              "fallback tick-set mismatch");
            }
            for (int m = 1; m <= n; ++m) {
                ScriptedTree t(make_parallel(m, action_leaves(n)), statuses);
                c.require(t.engine->tick_cycle() == oracle_parallel(statuses, m),
                          "parallel status mismatch");
                ++cases;
            }
            cases += 2;
        }
    }
    std::ostringstream os;
    os << cases << " cases";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 2. No barriers / delta = 1 leave per-tick trajectories bit-identical to
// the decorator-free tree.
bool criterion_transparency(std::string& detail) {
    Checker c;
    for (std::uint64_t seed = 0; seed < 100 && c.ok; ++seed) {
        for (bool absolute : {true, false}) {
            auto sync_doc = parse_ok(absolute ? absolute_sweep_doc(0, 0.01)
                                              : relative_sweep_doc(1.0, 0.01));
            auto plain_doc = parse_ok(absolute ? absolute_sweep_doc(0, 0.01, false)
                                               : relative_sweep_doc(1.0, 0.01, false));
            auto a = run_once(sync_doc, seed);
            auto b = run_once(plain_doc, seed);
            c.require(a.cycle_count() == b.cycle_count(), "run lengths differ");
            if (!c.ok) break;
            Engine ea(sync_doc, {});
            Engine eb(plain_doc, {});
            for (int i = 1; i <= 2; ++i) {
                std::string name = "a" + std::to_string(i);
                int na = ea.action_nodes(name).front();
                int nb = eb.action_nodes(name).front();
                auto sa = a.progress_series(na);
                auto sb = b.progress_series(nb);
                c.require(sa == sb, "progress trajectories differ");
                for (std::size_t k = 0; k < a.cycles.size() && c.ok; ++k)
                    c.require(a.cycles[k].status[static_cast<std::size_t>(na)] ==
                                  b.cycles[k].status[static_cast<std::size_t>(nb)],
                              "statuses differ");
            }
        }
    }
    detail = c.ok ? "100 seeds, absolute and relative, exact equality" : c.detail.str();
    return c.ok;
}

ExperimentResult g_absolute;  // shared with the time-cost criterion
ExperimentResult g_relative;

// ---------------------------------------------------------------------
// 3. More barriers tighten the median distance; synchronization shrinks
// the interquartile range.
bool criterion_absolute_trend(std::string& detail) {
    ExperimentSpec spec;
    spec.name = "absolute";
    spec.runs = 2000;
    spec.master_seed = kMasterSeed;
    spec.grid["barriers"] = {0, 3, 9};
    g_absolute = run_experiment(spec);

    Checker c;
    std::ostringstream medians;
    for (double w : {0.005, 0.01, 0.015}) {
        auto at = [&](double nb) {
            return cell_median(g_absolute,
                               [&](const CellKey& k) { return k.barriers == nb && k.omega == w; });
        };
        double m0 = at(0), m3 = at(3), m9 = at(9);
        medians << " w=" << w << ": " << m0 << " > " << m3 << " > " << m9;
        c.require(m0 > m3 && m3 > m9, "median not strictly decreasing in barrier count");
        const auto& unsync = find_cell(
            g_absolute, [&](const CellKey& k) { return k.barriers == 0 && k.omega == w; });
        for (double nb : {3.0, 9.0}) {
            const auto& cell = find_cell(g_absolute, [&](const CellKey& k) {
                return k.barriers == nb && k.omega == w;
            });
            c.require(cell.stats.iqr() < unsync.stats.iqr(),
                      "synchronized IQR not narrower than unsynchronized");
        }
    }
    detail = c.ok ? "2000 runs/cell;" + medians.str() : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 4. Smaller delta tightens the median distance; the zero-slack noise-free
// pair never drifts apart by more than one rate difference.
bool criterion_relative_trend(std::string& detail) {
    ExperimentSpec spec;
    spec.name = "relative";
    spec.runs = 2000;
    spec.master_seed = kMasterSeed;
    g_relative = run_experiment(spec);

    Checker c;
    for (double w : {0.005, 0.01, 0.015}) {
        auto at = [&](double d) {
            return cell_median(g_relative,
                               [&](const CellKey& k) { return k.delta == d && k.omega == w; });
        };
        c.require(at(1.0) > at(0.5) && at(0.5) > at(0.2) && at(0.2) > at(0.1),
                  "median not strictly decreasing in delta");
    }

    auto doc = parse_ok(relative_sweep_doc(0.0, 0.0));
    auto trace = run_once(doc, 1);
    std::vector<int> members;
    for (const Node* n : doc.nodes())
        if (n->kind == NodeKind::ProgressSync) members.push_back(n->id);
    for (const auto& rec : trace.cycles) {
        double p1 = rec.progress[static_cast<std::size_t>(members[0])];
        double p2 = rec.progress[static_cast<std::size_t>(members[1])];
        c.require(std::abs(p1 - p2) <= 0.01 + 1e-9, "zero-slack band exceeded |a1-a2|");
    }
    detail = c.ok ? "2000 runs/cell; band held at every cycle" : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 5. Distance medians grow (weakly) with the number of children.
bool criterion_child_scaling(std::string& detail) {
    Checker c;
    std::ostringstream note;
    for (const char* name : {"scaling-absolute", "scaling-relative"}) {
        ExperimentSpec spec;
        spec.name = name;
        spec.runs = 1000;
        spec.master_seed = kMasterSeed;
        auto result = run_experiment(spec);
        double prev = -1.0;
        note << " " << name << ":";
        for (double n : {2.0, 4.0, 8.0, 16.0}) {
            double med =
                cell_median(result, [&](const CellKey& k) { return k.children == n; });
            note << ' ' << med;
            c.require(med >= prev, std::string(name) + ": median decreased with more children");
            prev = med;
        }
    }
    detail = c.ok ? "1000 runs/cell;" + note.str() : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 6. Predictability: delta = 1 sits within one cycle of the derived value
// (3 cycles), and medians never improve as delta or noise grow.
bool criterion_predictability(std::string& detail) {
    ExperimentSpec spec;
    spec.name = "predictability";
    spec.runs = 2000;
    spec.master_seed = kMasterSeed;
    auto result = run_experiment(spec);

    Checker c;
    const std::vector<double> deltas = {0.1, 0.2, 0.5, 1.0};  // ascending
    const std::vector<double> omegas = {0.005, 0.01, 0.015};
    auto median_at = [&](double d, double w) {
        return cell_median(result, [&](const CellKey& k) {
            return k.delta == d && k.omega == w && k.pbar == 0.5;
        });
    };
    for (double w : omegas) {
        double m = median_at(1.0, w);
        c.require(std::abs(m - 3.0) <= 1.0, "delta=1 median off the 3-cycle oracle");
        double prev = -1.0;
        for (double d : deltas) {
            double cur = median_at(d, w);
            c.require(cur >= prev, "median decreased as delta grew");
            prev = cur;
        }
    }
    for (double d : deltas) {
        double prev = -1.0;
        for (double w : omegas) {
            double cur = median_at(d, w);
            c.require(cur >= prev, "median decreased as noise grew");
            prev = cur;
        }
    }
    detail = c.ok ? "2000 runs/cell over 12 cells, P(0.5) checks" : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 7. Dining robots: greedy holders stick, fair mode starves nobody, and
// cables are exclusive throughout.
bool criterion_dining(std::string& detail) {
    Checker c;
    for (bool fair : {false, true}) {
        ExperimentSpec spec;
        spec.name = fair ? "dining-fair" : "dining-greedy";
        spec.runs = 1;
        spec.master_seed = kMasterSeed;
        auto result = run_experiment(spec);
        c.require(result.trace.has_value(), "missing dining trace");
        const auto& trace = *result.trace;
        c.require(trace.completed, "dining run did not complete");

        const std::vector<int> robots = {2, 4, 6};
        // Battery demand is pairwise intersecting, so two robots charging
        // in one cycle would defeat mutual exclusion.
        std::vector<std::vector<std::size_t>> charge_cycles(3);
        std::vector<double> prev(3, 0.0);
        for (std::size_t k = 0; k < trace.cycle_count(); ++k) {
            int active = 0;
            for (std::size_t r = 0; r < 3; ++r) {
                double p = trace.cycles[k].progress[static_cast<std::size_t>(robots[r])];
                if (p > prev[r]) {
                    charge_cycles[r].push_back(k);
                    ++active;
                }
                prev[r] = p;
            }
            c.require(active <= 1, "two robots charged in the same cycle");
            // The allocation map itself is single-holder by construction;
            // check it stays consistent in the recorded trace.
            for (std::size_t q = 0; q < trace.resource_names.size(); ++q) {
                int holder = trace.cycles[k].holder[q];
                c.require(holder == -1 || holder == 1 || holder == 3 || holder == 5,
                          "cable held by a non-decorator node");
            }
        }
        for (std::size_t r = 0; r < 3; ++r)
            c.require(prev[r] == 1.0, "a battery never reached full charge");

        if (!fair) {
            for (const auto& cycles : charge_cycles) {
                c.require(cycles.size() == 10, "greedy charge is not ten steps");
                c.require(!cycles.empty() && cycles.back() - cycles.front() == 9,
                          "greedy charge window interrupted");
            }
            for (std::size_t q = 0; q < trace.resource_names.size(); ++q) {
                int changes = 0;
                int holder = -1;
                for (const auto& rec : trace.cycles) {
                    if (rec.holder[q] != holder) {
                        ++changes;
                        holder = rec.holder[q];
                    }
                }
                c.require(changes <= 3, "greedy cable changed hands too often");
            }
        }
    }
    detail = c.ok ? "greedy blocks intact, fair mode finished, exclusion held"
                  : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 8. Wrapping always-progressing finite actions in sync decorators under
// Parallel(M = N) preserves guaranteed success.
bool criterion_fts_preservation(std::string& detail) {
    Checker c;
    RngStream gen(kMasterSeed);
    for (int trial = 0; trial < 200 && c.ok; ++trial) {
        int n = 2 + static_cast<int>(gen.uniform(0, 7));
        std::ostringstream os;
        if (gen.uniform01() < 0.5) {
            int nb = static_cast<int>(gen.uniform(0, 10));
            os << "group g absolute [";
            for (int k = 1; k <= nb; ++k)
                os << (k > 1 ? " " : "") << dsl::format_number(double(k) / (nb + 1));
            os << "]\n";
        } else {
            os << "group g relative " << dsl::format_number(gen.uniform(0.0, 1.0)) << '\n';
        }
        for (int i = 0; i < n; ++i) {
            double rate = gen.uniform(0.02, 0.2);
            double noise = gen.uniform(0.0, rate * 0.9);  // always progressing
            os << "action t" << i << " stochastic " << dsl::format_number(rate) << ' '
               << dsl::format_number(noise) << '\n';
        }
        os << "(par " << n;
        for (int i = 0; i < n; ++i) os << " (psync g (act t" << i << "))";
        os << ")\n";

        auto doc = parse_ok(os.str());
        try {
            auto trace = run_once(doc, kMasterSeed + static_cast<std::uint64_t>(trial));
            c.require(trace.completed, "run incomplete");
            c.require(!trace.cycles.empty() &&
                          trace.cycles.back().status[0] ==
                              static_cast<std::int8_t>(Status::Success),
                      "root did not end in success");
        } catch (const AbortedRun&) {
            c.require(false, "synchronized tree hit its cycle cap");
        }
    }
    detail = c.ok ? "200 random trees, all succeeded before the cap" : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 9. Synchronization never speeds a run up: per-cell mean completion is at
// least the unsynchronized mean under the same seeds.
bool criterion_time_cost(std::string& detail) {
    Checker c;
    c.require(!g_absolute.cells.empty() && !g_relative.cells.empty(),
              "sweep results missing (criteria 3-4 must run first)");
    if (c.ok) {
        for (double w : {0.005, 0.01, 0.015}) {
            double base_abs = mean_completion(find_cell(
                g_absolute, [&](const CellKey& k) { return k.barriers == 0 && k.omega == w; }));
            for (const auto& cell : g_absolute.cells)
                if (cell.key.omega == w && cell.key.barriers > 0)
                    c.require(mean_completion(cell) >= base_abs,
                              "absolute sync finished faster than free run");
            double base_rel = mean_completion(find_cell(
                g_relative, [&](const CellKey& k) { return k.delta == 1.0 && k.omega == w; }));
            for (const auto& cell : g_relative.cells)
                if (cell.key.omega == w && cell.key.delta < 1.0)
                    c.require(mean_completion(cell) >= base_rel,
                              "relative sync finished faster than free run");
        }
    }
    detail = c.ok ? "every synchronized cell at or above the free-run mean" : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 10. DSL: 50-document round-trip plus the conflict lint pair.
bool criterion_dsl(std::string& detail) {
    Checker c;
    namespace fs = std::filesystem;
    int documents = 0;
    bool lint_fired = false, lint_quiet = true;
    for (const auto& entry : fs::directory_iterator(fs::path(CBT_TEST_DATA) / "corpus")) {
        if (entry.path().extension() != ".bt") continue;
        auto first = dsl::parse(slurp(entry.path()));
        c.require(first.ok(), entry.path().filename().string() + " failed to parse");
        if (!first.ok()) continue;
        auto printed = dsl::print(first.doc);
        auto second = dsl::parse(printed);
        c.require(second.ok() && structurally_equal(first.doc, second.doc),
                  entry.path().filename().string() + " did not round-trip");
        ++documents;
        bool warned = false;
        for (const auto& d : first.diagnostics) warned |= d.code == "W200";
        if (entry.path().filename() == "evasion_unguarded.bt") lint_fired = warned;
        if (entry.path().filename() == "evasion_guarded.bt") lint_quiet = !warned;
    }
    DocumentGenerator gen(kMasterSeed);
    while (documents < 50) {
        auto doc = gen.next();
        auto printed = dsl::print(doc);
        auto parsed = dsl::parse(printed);
        c.require(parsed.ok() && structurally_equal(doc, parsed.doc),
                  "generated document did not round-trip");
        ++documents;
    }
    c.require(lint_fired, "conflict lint silent on the unguarded tree");
    c.require(lint_quiet, "conflict lint fired on the guarded tree");
    std::ostringstream os;
    os << documents << " documents round-tripped; lint behaved";
    detail = c.ok ? os.str() : c.detail.str();
    return c.ok;
}

// ---------------------------------------------------------------------
// 11. Determinism: rerunning one cell with the same master seed emits
// byte-identical CSV files.
bool criterion_determinism(std::string& detail) {
    Checker c;
    namespace fs = std::filesystem;
    ExperimentSpec spec;
    spec.name = "absolute";
    spec.runs = 2000;
    spec.master_seed = kMasterSeed;
    spec.grid["barriers"] = {9};
    spec.grid["omega"] = {0.005};

    auto dir_a = fs::temp_directory_path() / "cbt_accept_a";
    auto dir_b = fs::temp_directory_path() / "cbt_accept_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    auto files_a = write_experiment(run_experiment(spec), dir_a.string());
    auto files_b = write_experiment(run_experiment(spec), dir_b.string());
    c.require(files_a.size() == files_b.size(), "different file sets");
    for (std::size_t i = 0; i < files_a.size() && c.ok; ++i)
        c.require(slurp(files_a[i]) == slurp(files_b[i]), "csv bytes differ between reruns");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    detail = c.ok ? "rerun produced byte-identical CSV" : c.detail.str();
    return c.ok;
}

struct Criterion {
    int index;
    const char* title;
    bool (*fn)(std::string&);
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "node semantics match the exhaustive oracle", criterion_node_oracle},
        {2, "no-op synchronization is transparent", criterion_transparency},
        {3, "absolute sweep: medians fall, spread narrows", criterion_absolute_trend},
        {4, "relative sweep: medians fall, zero-slack band holds", criterion_relative_trend},
        {5, "distance grows with child count", criterion_child_scaling},
        {6, "predictability tracks the derived oracle", criterion_predictability},
        {7, "dining robots: greedy retention, fair completion, exclusion",
         criterion_dining},
        {8, "sync decorators preserve guaranteed success", criterion_fts_preservation},
        {9, "synchronization never speeds a run up", criterion_time_cost},
        {10, "tree files round-trip and the conflict lint discriminates", criterion_dsl},
        {11, "experiments are byte-deterministic", criterion_determinism},
    };

    bool all_ok = true;
    for (const auto& criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::printf("[%s] criterion %2d: %s (%lld ms) — %s\n", ok ? "PASS" : "FAIL",
                    criterion.index, criterion.title, static_cast<long long>(ms),
                    detail.c_str());
        all_ok &= ok;
    }
    return all_ok ? 0 : 1;
}
