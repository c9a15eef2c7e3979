#include "experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "dsl.hpp"
#include "engine.hpp"
#include "rng.hpp"
#include "sim.hpp"

namespace cbt {

namespace {

const std::vector<double> kDefaultBarrierCounts = {0, 1, 3, 9};
const std::vector<double> kDefaultDeltas = {1.0, 0.5, 0.2, 0.1};
const std::vector<double> kDefaultOmegas = {0.005, 0.01, 0.015};
const std::vector<double> kDefaultChildren = {2, 4, 8, 16};
const std::vector<double> kDefaultPbars = {0.25, 0.5, 0.75};

constexpr double kProfileRate = 0.1;      // predictability reference
constexpr double kConstrainedRate = 0.2;  // action whose timeline is imposed

std::vector<double> grid_axis(const ExperimentSpec& spec, const std::string& key,
                              const std::vector<double>& fallback) {
    auto it = spec.grid.find(key);
    return it != spec.grid.end() && !it->second.empty() ? it->second : fallback;
}

std::string group_decl(const std::string& name, bool absolute, double value) {
    std::ostringstream os;
    os << "group " << name << ' ';
    if (absolute) {
        os << "absolute [";
        auto bs = equidistant_barriers(static_cast<int>(value));
        for (std::size_t i = 0; i < bs.size(); ++i)
            os << (i ? " " : "") << dsl::format_number(bs[i]);
        os << ']';
    } else {
        os << "relative " << dsl::format_number(value);
    }
    os << '\n';
    return os.str();
}

/// Parallel of stochastic actions, each optionally wrapped in a
/// ProgressSync member of group "g".
std::string stochastic_parallel_doc(const std::string& group,
                                    const std::vector<double>& rates, double omega,
                                    bool decorated) {
    std::ostringstream os;
    os << group;
    for (std::size_t i = 0; i < rates.size(); ++i)
        os << "action a" << i + 1 << " stochastic " << dsl::format_number(rates[i]) << ' '
           << dsl::format_number(omega) << '\n';
    os << "(par " << rates.size();
    for (std::size_t i = 0; i < rates.size(); ++i) {
        if (decorated) os << " (psync g (act a" << i + 1 << "))";
        else os << " (act a" << i + 1 << ")";
    }
    os << ")\n";
    return os.str();
}

std::vector<int> progress_sync_ids(const Document& doc) {
    std::vector<int> out;
    for (const Node* n : doc.nodes())
        if (n->kind == NodeKind::ProgressSync) out.push_back(n->id);
    return out;
}

int action_node_id(const Document& doc, const std::string& name) {
    for (const Node* n : doc.nodes())
        if (n->kind == NodeKind::Action && n->name == name) return n->id;
    throw std::invalid_argument("no action named " + name);
}

Engine::RunResult run_or_abort(const Document& doc, std::uint64_t seed, std::uint64_t cap) {
    Engine engine(doc, {.seed = seed, .model_override = {}});
    auto res = engine.run(cap);
    if (!res.completed) {
        std::ostringstream msg;
        msg << "experiment run aborted after " << res.cycles << " cycles";
        throw AbortedRun(msg.str(), std::move(res.trace));
    }
    return res;
}

/// Shared runner for the distance experiments: one simulated cell, value =
/// mean progress distance of group g. `seed_group` keys the per-run seed
/// derivation: cells that differ only in synchronization level pass the
/// same group, so their runs share random streams and stay pairwise
/// comparable (a gated action replays the exact same steps, just later).
CellResult distance_cell(const Document& doc, CellKey key, std::uint64_t sim_cell,
                         std::uint64_t seed_group, std::uint64_t runs,
                         std::uint64_t master_seed) {
    CellResult cr;
    cr.key = key;
    cr.sim_cell = sim_cell;
    auto members = progress_sync_ids(doc);
    const std::uint64_t cap = default_cycle_cap(doc);
    std::vector<double> values;
    values.reserve(runs);
    for (std::uint64_t run = 0; run < runs; ++run) {
        std::uint64_t seed = derive_run_seed(master_seed, seed_group, run);
        auto res = run_or_abort(doc, seed, cap);
        double value = mean_progress_distance(res.trace, members);
        cr.rows.push_back({run, seed, value, res.cycles});
        values.push_back(value);
    }
    cr.stats = summarize(std::move(values));
    return cr;
}

ExperimentResult sweep_experiment(const ExperimentSpec& spec, bool absolute) {
    ExperimentResult out;
    out.name = spec.name;
    auto axis = grid_axis(spec, absolute ? "barriers" : "delta",
                          absolute ? kDefaultBarrierCounts : kDefaultDeltas);
    auto omegas = grid_axis(spec, "omega", kDefaultOmegas);
    std::uint64_t cell = 0;
    for (double v : axis) {
        for (std::size_t wi = 0; wi < omegas.size(); ++wi) {
            double w = omegas[wi];
            auto doc = parse_experiment_doc(absolute
                                                ? absolute_sweep_doc(static_cast<int>(v), w)
                                                : relative_sweep_doc(v, w));
            CellKey key;
            (absolute ? key.barriers : key.delta) = v;
            key.omega = w;
            out.cells.push_back(
                distance_cell(doc, key, cell, wi, spec.runs, spec.master_seed));
            ++cell;
        }
    }
    return out;
}

ExperimentResult scaling_experiment(const ExperimentSpec& spec, bool absolute) {
    ExperimentResult out;
    out.name = spec.name;
    auto counts = grid_axis(spec, "children", kDefaultChildren);
    auto omegas = grid_axis(spec, "omega", {0.015});
    std::uint64_t cell = 0;
    for (double n : counts) {
        for (std::size_t wi = 0; wi < omegas.size(); ++wi) {
            auto doc =
                parse_experiment_doc(scaling_doc(absolute, static_cast<int>(n), omegas[wi]));
            CellKey key;
            key.children = n;
            key.omega = omegas[wi];
            out.cells.push_back(
                distance_cell(doc, key, cell, wi, spec.runs, spec.master_seed));
            ++cell;
        }
    }
    return out;
}

ExperimentResult predictability_experiment(const ExperimentSpec& spec) {
    ExperimentResult out;
    out.name = spec.name;
    auto deltas = grid_axis(spec, "delta", kDefaultDeltas);
    auto omegas = grid_axis(spec, "omega", kDefaultOmegas);
    auto pbars = grid_axis(spec, "pbar", kDefaultPbars);

    std::uint64_t sim_cell = 0;
    for (double d : deltas) {
        for (std::size_t wi = 0; wi < omegas.size(); ++wi) {
            double w = omegas[wi];
            auto doc = parse_experiment_doc(predictability_doc(d, w));
            int arm = action_node_id(doc, "arm");
            const std::uint64_t cap = default_cycle_cap(doc);

            // One simulation per run; every pbar is evaluated on the same
            // trace, so all pbar cells of a (delta, omega) pair share seeds.
            std::vector<CellResult> per_pbar(pbars.size());
            for (std::size_t p = 0; p < pbars.size(); ++p) {
                per_pbar[p].key = {std::numeric_limits<double>::quiet_NaN(), d, w,
                                   std::numeric_limits<double>::quiet_NaN(), pbars[p]};
                per_pbar[p].sim_cell = sim_cell;
            }
            for (std::uint64_t run = 0; run < spec.runs; ++run) {
                std::uint64_t seed = derive_run_seed(spec.master_seed, wi, run);
                auto res = run_or_abort(doc, seed, cap);
                auto series = res.trace.progress_series(arm);
                for (std::size_t p = 0; p < pbars.size(); ++p) {
                    double value = predictability_distance(
                        series, pbars[p], predictability_expected_cycle(pbars[p]));
                    per_pbar[p].rows.push_back({run, seed, value, res.cycles});
                }
            }
            for (auto& cr : per_pbar) {
                std::vector<double> values;
                values.reserve(cr.rows.size());
                for (const auto& row : cr.rows) values.push_back(row.value);
                cr.stats = summarize(std::move(values));
                out.cells.push_back(std::move(cr));
            }
            ++sim_cell;
        }
    }
    return out;
}

ExperimentResult dining_experiment(const ExperimentSpec& spec, bool fair) {
    ExperimentResult out;
    out.name = spec.name;
    auto doc = parse_experiment_doc(dining_doc(fair));
    std::uint64_t seed = derive_run_seed(spec.master_seed, 0, 0);
    auto res = run_or_abort(doc, seed, default_cycle_cap(doc));
    CellResult cr;
    cr.sim_cell = 0;
    cr.rows.push_back({0, seed, static_cast<double>(res.cycles), res.cycles});
    cr.stats = summarize({static_cast<double>(res.cycles)});
    out.cells.push_back(std::move(cr));
    out.trace = std::move(res.trace);
    return out;
}

void append_key(std::ostringstream& os, const CellKey& k) {
    auto field = [&](double v) {
        os << ',';
        if (!std::isnan(v)) os << dsl::format_number(v);
    };
    field(k.barriers);
    field(k.delta);
    field(k.omega);
    field(k.children);
    field(k.pbar);
}

}  // namespace

std::vector<double> equidistant_barriers(int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) out.push_back(static_cast<double>(k) / (n + 1));
    return out;
}

double predictability_expected_cycle(double pbar) { return pbar / kProfileRate; }

std::string absolute_sweep_doc(int barrier_count, double omega, bool decorated) {
    return stochastic_parallel_doc(group_decl("g", true, barrier_count), {0.03, 0.02}, omega,
                                   decorated);
}

std::string relative_sweep_doc(double delta, double omega, bool decorated) {
    return stochastic_parallel_doc(group_decl("g", false, delta), {0.03, 0.02}, omega,
                                   decorated);
}

std::string scaling_doc(bool absolute, int children, double omega) {
    std::vector<double> rates(static_cast<std::size_t>(children), 0.03);
    return stochastic_parallel_doc(group_decl("g", absolute, absolute ? 9 : 0.1), rates, omega,
                                   true);
}

std::string predictability_doc(double delta, double omega) {
    std::ostringstream os;
    os << group_decl("g", false, delta);
    os << "action prof profile " << dsl::format_number(kProfileRate) << '\n';
    os << "action arm stochastic " << dsl::format_number(kConstrainedRate) << ' '
       << dsl::format_number(omega) << '\n';
    os << "(par 2 (psync g (act prof)) (psync g (act arm)))\n";
    return os.str();
}

std::string dining_doc(bool fair) {
    std::ostringstream os;
    const char* g = fair ? "const 1" : "zero";
    os << "resources {A, B, C}\n";
    os << "action r1 battery 0.1 uses {A, B}\n";
    os << "action r2 battery 0.1 uses {B, C}\n";
    os << "action r3 battery 0.1 uses {C, A}\n";
    os << "(par 3 (rsync " << g << " (act r1)) (rsync " << g << " (act r2)) (rsync " << g
       << " (act r3)))\n";
    return os.str();
}

Document parse_experiment_doc(const std::string& text) {
    auto result = dsl::parse(text);
    if (!result.ok())
        throw std::logic_error("generated experiment document failed to parse: " +
                               result.diagnostics.front().format("<generated>"));
    return std::move(result.doc);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    if (spec.name == "absolute") return sweep_experiment(spec, true);
    if (spec.name == "relative") return sweep_experiment(spec, false);
    if (spec.name == "scaling-absolute") return scaling_experiment(spec, true);
    if (spec.name == "scaling-relative") return scaling_experiment(spec, false);
    if (spec.name == "predictability") return predictability_experiment(spec);
    if (spec.name == "dining-greedy") return dining_experiment(spec, false);
    if (spec.name == "dining-fair") return dining_experiment(spec, true);
    throw std::invalid_argument("unknown experiment: " + spec.name);
}

std::string runs_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "experiment,cell,barriers,delta,omega,children,pbar,run,seed,value,completion_cycles\n";
    for (const auto& cell : r.cells) {
        for (const auto& row : cell.rows) {
            os << r.name << ',' << cell.sim_cell;
            append_key(os, cell.key);
            os << ',' << row.run << ',' << row.seed << ',' << dsl::format_number(row.value)
               << ',' << row.completion << '\n';
        }
    }
    return os.str();
}

std::string summary_csv(const ExperimentResult& r) {
    std::ostringstream os;
    os << "experiment,cell,barriers,delta,omega,children,pbar,n,min,q1,median,q3,max\n";
    for (const auto& cell : r.cells) {
        os << r.name << ',' << cell.sim_cell;
        append_key(os, cell.key);
        os << ',' << cell.stats.n << ',' << dsl::format_number(cell.stats.min) << ','
           << dsl::format_number(cell.stats.q1) << ',' << dsl::format_number(cell.stats.median)
           << ',' << dsl::format_number(cell.stats.q3) << ','
           << dsl::format_number(cell.stats.max) << '\n';
    }
    return os.str();
}

std::vector<std::string> write_experiment(const ExperimentResult& r,
                                          const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    auto emit = [&](const std::string& suffix, const std::string& content) {
        auto path = (fs::path(out_dir) / (r.name + suffix)).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output file: " + path);
        out << content;
        if (!out) throw std::runtime_error("failed writing output file: " + path);
        written.push_back(path);
    };
    emit("_runs.csv", runs_csv(r));
    emit("_summary.csv", summary_csv(r));
    if (r.trace) emit("_trace.csv", trace_csv(*r.trace));
    return written;
}

std::map<std::string, std::vector<double>> parse_grid_overrides(const std::string& text) {
    std::map<std::string, std::vector<double>> out;
    std::istringstream groups(text);
    std::string item;
    while (std::getline(groups, item, ';')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("grid override must look like key=v1,v2: " + item);
        std::string key = item.substr(0, eq);
        std::vector<double> values;
        std::istringstream vals(item.substr(eq + 1));
        std::string v;
        while (std::getline(vals, v, ',')) {
            if (v.empty()) continue;
            values.push_back(std::stod(v));
        }
        if (key.empty() || values.empty())
            throw std::invalid_argument("grid override must look like key=v1,v2: " + item);
        out[key] = std::move(values);
    }
    return out;
}

}  // namespace cbt
