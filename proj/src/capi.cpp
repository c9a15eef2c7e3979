#include "cbt/cbt.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsl.hpp"
#include "engine.hpp"
#include "experiments.hpp"
#include "sim.hpp"
#include "tree.hpp"

namespace {

thread_local std::string g_last_error;

void set_error(std::string message) { g_last_error = std::move(message); }

template <typename Fn>
cbt_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const cbt::AbortedRun& e) {
        set_error(e.what());
        return CBT_ERROR_RUN_ABORTED;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return CBT_ERROR_INVALID_ARG;
    } catch (const std::exception& e) {
        set_error(e.what());
        return CBT_ERROR_INTERNAL;
    }
}

}  // namespace

struct cbt_tree {
    cbt::Document doc;
    std::vector<std::string> diagnostics;
    bool valid = false;
};

struct cbt_run {
    cbt::TickTrace trace;
    uint64_t cycles = 0;
    bool completed = false;
};

extern "C" {

const char* cbt_status_message(cbt_status status) {
    switch (status) {
        case CBT_OK: return "ok";
        case CBT_ERROR_PARSE: return "tree text has errors";
        case CBT_ERROR_IO: return "i/o failure";
        case CBT_ERROR_INVALID_ARG: return "invalid argument";
        case CBT_ERROR_RUN_ABORTED: return "run aborted at cycle cap";
        case CBT_ERROR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* cbt_version(void) { return "0.1.0"; }

const char* cbt_last_error(void) { return g_last_error.c_str(); }

static cbt_status parse_into(const std::string& text, const char* file, cbt_tree** out) {
    auto result = cbt::dsl::parse(text);
    auto tree = new cbt_tree;
    tree->valid = result.ok();
    for (const auto& d : result.diagnostics) tree->diagnostics.push_back(d.format(file));
    if (tree->valid) tree->doc = std::move(result.doc);
    *out = tree;
    if (!tree->valid) {
        set_error(tree->diagnostics.empty() ? "parse failed" : tree->diagnostics.front());
        return CBT_ERROR_PARSE;
    }
    return CBT_OK;
}

cbt_status cbt_tree_parse(const char* text, cbt_tree** out) {
    if (!text || !out) {
        set_error("cbt_tree_parse: null argument");
        return CBT_ERROR_INVALID_ARG;
    }
    return guarded([&] { return parse_into(text, "<string>", out); });
}

cbt_status cbt_tree_parse_file(const char* path, cbt_tree** out) {
    if (!path || !out) {
        set_error("cbt_tree_parse_file: null argument");
        return CBT_ERROR_INVALID_ARG;
    }
    return guarded([&]() -> cbt_status {
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            set_error(std::string("cannot open ") + path);
            return CBT_ERROR_IO;
        }
        std::ostringstream text;
        text << in.rdbuf();
        return parse_into(text.str(), path, out);
    });
}

void cbt_tree_free(cbt_tree* tree) { delete tree; }

int cbt_tree_diagnostic_count(const cbt_tree* tree) {
    return tree ? static_cast<int>(tree->diagnostics.size()) : 0;
}

const char* cbt_tree_diagnostic(const cbt_tree* tree, int index) {
    if (!tree || index < 0 || index >= static_cast<int>(tree->diagnostics.size())) return nullptr;
    return tree->diagnostics[static_cast<std::size_t>(index)].c_str();
}

char* cbt_tree_print(const cbt_tree* tree) {
    if (!tree || !tree->valid) return nullptr;
    auto text = cbt::dsl::print(tree->doc);
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (!out) return nullptr;
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

void cbt_string_free(char* text) { std::free(text); }

cbt_status cbt_tree_run(const cbt_tree* tree, uint64_t seed, uint64_t max_cycles,
                        cbt_run** out) {
    if (!tree || !out) {
        set_error("cbt_tree_run: null argument");
        return CBT_ERROR_INVALID_ARG;
    }
    if (!tree->valid) {
        set_error("cbt_tree_run: tree did not parse cleanly");
        return CBT_ERROR_INVALID_ARG;
    }
    return guarded([&]() -> cbt_status {
        auto run = new cbt_run;
        try {
            run->trace = cbt::run_once(tree->doc, seed, max_cycles);
            run->completed = true;
        } catch (cbt::AbortedRun& e) {
            run->trace = std::move(e.trace);
            run->completed = false;
            set_error(e.what());
        }
        run->cycles = run->trace.cycle_count();
        *out = run;
        return run->completed ? CBT_OK : CBT_ERROR_RUN_ABORTED;
    });
}

void cbt_run_free(cbt_run* run) { delete run; }

uint64_t cbt_run_cycles(const cbt_run* run) { return run ? run->cycles : 0; }

int cbt_run_completed(const cbt_run* run) { return run && run->completed ? 1 : 0; }

cbt_status cbt_run_write_trace_csv(const cbt_run* run, const char* path) {
    if (!run || !path) {
        set_error("cbt_run_write_trace_csv: null argument");
        return CBT_ERROR_INVALID_ARG;
    }
    return guarded([&]() -> cbt_status {
        try {
            cbt::write_trace_csv(run->trace, path);
        } catch (const std::runtime_error& e) {
            set_error(e.what());
            return CBT_ERROR_IO;
        }
        return CBT_OK;
    });
}

cbt_status cbt_experiment_run(const char* name, uint64_t runs, uint64_t seed,
                              const char* out_dir, const char* grid) {
    if (!name || !out_dir) {
        set_error("cbt_experiment_run: null argument");
        return CBT_ERROR_INVALID_ARG;
    }
    return guarded([&]() -> cbt_status {
        cbt::ExperimentSpec spec;
        spec.name = name;
        spec.runs = runs == 0 ? 10000 : runs;
        spec.master_seed = seed;
        if (grid && *grid) spec.grid = cbt::parse_grid_overrides(grid);
        auto result = cbt::run_experiment(spec);
        try {
            cbt::write_experiment(result, out_dir);
        } catch (const std::runtime_error& e) {
            set_error(e.what());
            return CBT_ERROR_IO;
        }
        return CBT_OK;
    });
}

}  // extern "C"
