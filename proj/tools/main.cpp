// Command-line front end. Links the public C interface only, so it doubles
// as a smoke test that libcbt is usable without the C++ headers.

#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "cbt/cbt.h"

namespace {

void print_diagnostics(const cbt_tree* tree) {
    for (int i = 0; i < cbt_tree_diagnostic_count(tree); ++i)
        std::fprintf(stderr, "%s\n", cbt_tree_diagnostic(tree, i));
}

int fail(cbt_status status) {
    std::fprintf(stderr, "error: %s", cbt_status_message(status));
    const char* detail = cbt_last_error();
    if (detail && *detail) std::fprintf(stderr, " (%s)", detail);
    std::fprintf(stderr, "\n");
    return 1;
}

int cmd_run(const std::string& file, std::uint64_t seed, std::uint64_t max_cycles,
            const std::string& trace_path) {
    cbt_tree* tree = nullptr;
    cbt_status st = cbt_tree_parse_file(file.c_str(), &tree);
    if (tree) print_diagnostics(tree);
    if (st != CBT_OK) {
        cbt_tree_free(tree);
        return fail(st);
    }
    cbt_run* run = nullptr;
    st = cbt_tree_run(tree, seed, max_cycles, &run);
    int rc = 0;
    if (run) {
        std::printf("%s after %llu cycles\n",
                    cbt_run_completed(run) ? "completed" : "aborted",
                    static_cast<unsigned long long>(cbt_run_cycles(run)));
        if (!trace_path.empty()) {
            cbt_status ts = cbt_run_write_trace_csv(run, trace_path.c_str());
            if (ts != CBT_OK) rc = fail(ts);
        }
    }
    if (st != CBT_OK && rc == 0) rc = fail(st);
    cbt_run_free(run);
    cbt_tree_free(tree);
    return rc;
}

int cmd_check(const std::string& file, bool print_canonical) {
    cbt_tree* tree = nullptr;
    cbt_status st = cbt_tree_parse_file(file.c_str(), &tree);
    if (tree) print_diagnostics(tree);
    int rc = 0;
    if (st == CBT_OK && print_canonical) {
        char* text = cbt_tree_print(tree);
        if (text) {
            std::fputs(text, stdout);
            cbt_string_free(text);
        }
    }
    if (st != CBT_OK) rc = st == CBT_ERROR_PARSE ? 1 : fail(st);
    cbt_tree_free(tree);
    return rc;
}

int cmd_experiment(const std::string& name, std::uint64_t runs, std::uint64_t seed,
                   const std::string& out_dir, const std::string& grid) {
    cbt_status st = cbt_experiment_run(name.c_str(), runs, seed, out_dir.c_str(),
                                       grid.empty() ? nullptr : grid.c_str());
    if (st != CBT_OK) return fail(st);
    std::printf("wrote %s results to %s\n", name.c_str(), out_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"concurrent behavior tree engine"};
    app.require_subcommand(1);

    std::string file, trace_path, out_dir = ".", grid, format = "csv";
    std::uint64_t seed = 0, max_cycles = 0, runs = 10000;

    auto* run = app.add_subcommand("run", "execute one tree file");
    run->add_option("file", file, "tree file (.bt)")->required();
    run->add_option("--seed", seed, "rng master seed");
    run->add_option("--max-cycles", max_cycles, "cycle cap (0 = derived from the tree)");
    run->add_option("--trace", trace_path, "write the per-cycle trace CSV here");

    auto* check = app.add_subcommand("check", "parse a tree file and report diagnostics");
    check->add_option("file", file, "tree file (.bt)")->required();
    bool print_canonical = false;
    check->add_flag("--print", print_canonical, "print the canonical form on success");

    auto* exp = app.add_subcommand("experiment", "run a named study and emit CSV");
    std::string name;
    exp->add_option("name", name,
                    "absolute | relative | scaling-absolute | scaling-relative | "
                    "predictability | dining-greedy | dining-fair")
        ->required();
    exp->add_option("--runs", runs, "runs per grid cell");
    exp->add_option("--seed", seed, "master seed");
    exp->add_option("--out", out_dir, "output directory");
    exp->add_option("--grid", grid, "axis overrides, e.g. barriers=0,3,9;omega=0.01");
    exp->add_option("--format", format, "output format (csv)")
        ->check(CLI::IsMember({"csv"}));

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(file, seed, max_cycles, trace_path);
    if (check->parsed()) return cmd_check(file, print_canonical);
    return cmd_experiment(name, runs, seed, out_dir, grid);
}
