#pragma once

// argv front end: flags override the --config manifest, which overrides the
// built-in defaults. Kept in a header so tests can drive it in-process.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sabroots/cli.hpp"

namespace sabroots::cli {

struct Overrides {
    std::optional<std::string> config;
    std::optional<std::string> fixture;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> emit;
    std::optional<std::string> method;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::string> grid;
    std::optional<int> ens;
    std::optional<int> window;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<unsigned> workers;
    std::optional<int> reps;
};

/// Builds the manifest for `command` from a config file and flag overrides.
inline io::Manifest resolve_manifest(const Overrides& o, const std::string& command) {
    io::Manifest m;
    if (o.config) m = io::load_manifest(io::read_file(*o.config));
    if (o.fixture) io::set_fixture(m, *o.fixture);
    if (o.seed) m.seed = *o.seed;
    if (o.out) m.output_dir = *o.out;
    if (o.emit) {
        const auto mask = io::parse_emit(*o.emit);
        if (!mask) throw UsageError("--emit accepts a comma list of csv, json, image");
        m.emit = *mask;
    }
    if (o.method) {
        const auto ids = io::parse_method_list(*o.method);
        if (!ids) throw UsageError("unknown method '" + *o.method + "' (valid: " + io::valid_method_ids() + ")");
        if (command == "bench") {
            m.bench_methods = *ids;
        } else {
            if (ids->size() != 1) throw UsageError("--method takes a single id outside bench");
            m.solver.method = ids->front();
        }
    }
    if (o.alpha) m.solver.alpha = *o.alpha;
    if (o.beta) m.solver.beta = *o.beta;
    if (o.grid) {
        const auto axes = io::split(*o.grid, ',');
        const auto a = axes.size() == 2 ? io::parse_axis(axes[0]) : std::nullopt;
        const auto b = axes.size() == 2 ? io::parse_axis(axes[1]) : std::nullopt;
        if (!a || !b) throw UsageError("--grid expects a0:a1:na,b0:b1:nb");
        m.grid_alpha = *a;
        m.grid_beta = *b;
    }
    if (o.ens) {
        if (*o.ens < 1) throw UsageError("--ens must be >= 1");
        m.n_ens = *o.ens;
    }
    if (o.window) {
        if (*o.window < 1) throw UsageError("--window must be >= 1");
        m.profiling.window = *o.window;
    }
    if (o.tol) m.solver.tol = *o.tol;
    if (o.max_iter) m.solver.max_iter = *o.max_iter;
    if (o.workers) m.workers = *o.workers;
    if (o.reps) {
        if (*o.reps < 1) throw UsageError("--reps must be >= 1");
        m.reps = *o.reps;
    }
    m.solver.validate();
    return m;
}

inline int run_app(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simultaneous root finding with SAB3 and reference schemes, contraction profiling and tuning"};
    app.name("sabroots");
    app.require_subcommand(1, 1);
    app.fallthrough();

    const io::Manifest defaults;
    const SolverConfig sd;
    Overrides o;
    app.add_option("--config", o.config, "Manifest file ([problem], [solver], [start], ...)");
    app.add_option("--fixture", o.fixture, "Built-in problem: grn7, hill6, expquartic, wdk_demo, order5");
    app.add_option("--seed", o.seed, "Master seed")->default_str(std::to_string(defaults.seed));
    app.add_option("--out", o.out, "Output directory")->default_str(defaults.output_dir);
    app.add_option("--emit", o.emit, "Artifacts to write: csv,json,image")->default_str("csv,json,image");
    app.add_option("--method", o.method, "Method id (bench: comma list; default all six)")
        ->default_str(std::string(to_string(sd.method)));
    app.add_option("--alpha", o.alpha, "SAB3 predictor alpha")->default_str(io::format_double(sd.alpha));
    app.add_option("--beta", o.beta, "SAB3 predictor beta")->default_str(io::format_double(sd.beta));
    app.add_option("--grid", o.grid, "Scan grid a0:a1:na,b0:b1:nb")->default_str("none (required by scan)");
    app.add_option("--ens", o.ens, "Launches per profile or grid cell")->default_str(std::to_string(defaults.n_ens));
    app.add_option("--window", o.window, "Profile window W")
        ->default_str(std::to_string(defaults.profiling.window));
    app.add_option("--tol", o.tol, "Step-norm stopping tolerance")->default_str(io::format_double(sd.tol));
    app.add_option("--max-iter", o.max_iter, "Iteration cap")->default_str(std::to_string(sd.max_iter));
    app.add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)")->default_str("0");
    app.add_option("--reps", o.reps, "Bench repetitions (median reported)")->default_str("1");

    auto* solve = app.add_subcommand("solve", "Run one solve; exit 0 Converged, 2 Diverged, 3 MaxIterReached");
    auto* profile = app.add_subcommand("profile", "Ensemble contraction profile and scores at (alpha, beta)");
    auto* scanc = app.add_subcommand("scan", "Score an (alpha, beta) grid and select the best cell");
    auto* bench = app.add_subcommand("bench", "Compare methods on one problem");
    app.footer(
        "Exit codes: 0 ok/converged, 1 usage or parse error, 2 diverged, 3 max iterations, 4 no scorable profile.\n"
        "Starts: solve/bench use the problem's scattered starts, profile/scan draw from the root-radius disk.");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitUsage);
    }

    std::string command;
    for (auto* sub : {solve, profile, scanc, bench}) {
        if (sub->parsed()) command = sub->get_name();
    }

    io::Manifest m;
    const int rc = detail::guarded(err, [&] {
        m = resolve_manifest(o, command);
        return static_cast<int>(kExitOk);
    });
    if (rc != kExitOk) return rc;

    if (command == "solve") return cmd_solve(m, out, err);
    if (command == "profile") return cmd_profile(m, out, err);
    if (command == "scan") return cmd_scan(m, out, err);
    return cmd_bench(m, out, err);
}

}  // namespace sabroots::cli
