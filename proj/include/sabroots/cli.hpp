#pragma once

// The four commands behind the `sabroots` binary. Each takes a resolved
// manifest, writes its artifacts under manifest.output_dir and returns an
// exit code from the closed set below. Nothing here parses argv; see
// cli_app.hpp for that.

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sabroots/io/config.hpp"
#include "sabroots/io/csv.hpp"
#include "sabroots/io/json_out.hpp"
#include "sabroots/io/pgm.hpp"
#include "sabroots/metrics.hpp"
#include "sabroots/tuner.hpp"

namespace sabroots::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,  ///< bad manifest, flags, or I/O failure
    kExitDiverged = 2,
    kExitMaxIter = 3,
    kExitNoScorable = 4,
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline const ProblemSpec& require_problem(const io::Manifest& m) {
    if (!m.problem) throw UsageError("no problem given (use [problem] in the config or --fixture)");
    return *m.problem;
}

inline std::string out_path(const io::Manifest& m, const std::string& file) {
    std::filesystem::create_directories(m.output_dir);
    return (std::filesystem::path(m.output_dir) / file).string();
}

/// Single-run starts for solve.
inline IterateVector solve_starts(const io::Manifest& m) {
    const auto& p = require_problem(m);
    const auto seed = derive_seed(m.seed, 0, 0, 0);
    switch (m.start.mode) {
        case io::StartMode::Values:
            return m.start.values;
        case io::StartMode::Disk:
            return random_initials(p, DiskRadius{m.start.radius}, seed);
        case io::StartMode::Perturb:
            return random_initials(p, PerturbReference{m.start.sigma, std::nullopt}, seed);
        case io::StartMode::Scattered:
            if (m.scattered_starts.empty()) throw UsageError("problem has no built-in scattered starts");
            return m.scattered_starts;
        case io::StartMode::Default:
            break;
    }
    if (!m.scattered_starts.empty()) return m.scattered_starts;
    return random_initials(p, DiskRadius{m.start.radius}, seed);
}

/// Ensemble starts for profile and scan. Fixed vectors become a zero-noise
/// perturbation so every launch repeats them.
inline InitMode ensemble_init(const io::Manifest& m) {
    switch (m.start.mode) {
        case io::StartMode::Values:
            return PerturbReference{0.0, m.start.values};
        case io::StartMode::Scattered:
            if (m.scattered_starts.empty()) throw UsageError("problem has no built-in scattered starts");
            return PerturbReference{0.0, m.scattered_starts};
        case io::StartMode::Perturb:
            return PerturbReference{m.start.sigma, std::nullopt};
        case io::StartMode::Disk:
        case io::StartMode::Default:
            break;
    }
    return DiskRadius{m.start.radius};
}

inline StartPolicy bench_starts(const io::Manifest& m) {
    switch (m.start.mode) {
        case io::StartMode::Disk:
            return RandomStarts{DiskRadius{m.start.radius}, m.seed};
        case io::StartMode::Perturb:
            return RandomStarts{PerturbReference{m.start.sigma, std::nullopt}, m.seed};
        default:
            return solve_starts(m);
    }
}

inline void check_perturb_possible(const io::Manifest& m) {
    if (m.start.mode == io::StartMode::Perturb && !require_problem(m).reference_roots()) {
        throw UsageError("start mode 'perturb' needs reference roots");
    }
}

inline io::CsvTable heatmap_table(const ScanResult& r, const Grid2D& g) {
    io::CsvTable t;
    t.header.push_back("alpha/beta");
    for (double b : r.betas) t.header.push_back(io::format_double(b));
    for (std::size_t i = 0; i < g.rows; ++i) {
        std::vector<io::Cell> row{r.alphas[i]};
        for (std::size_t j = 0; j < g.cols; ++j) row.emplace_back(g(i, j));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline io::Cell opt_cell(const std::optional<double>& v) {
    if (v) return *v;
    return io::Empty{};
}

inline std::string aligned_table(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()), 0);
        for (std::size_t k = 0; k < r.size(); ++k) width[k] = std::max(width[k], r[k].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (k) os << "  ";
            // method names left-aligned, numbers right-aligned
            if (k == 0) {
                os << std::left << std::setw(static_cast<int>(width[k])) << r[k];
            } else {
                os << std::right << std::setw(static_cast<int>(width[k])) << r[k];
            }
        }
        os << '\n';
    }
    return os.str();
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const io::ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::length_error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

}  // namespace detail

/// trajectory.csv + metrics.json. Exit 0 / 2 / 3 by final status.
inline int cmd_solve(const io::Manifest& m, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (m.has_grid()) throw UsageError("solve does not take a grid (use scan)");
        const auto& p = detail::require_problem(m);
        detail::check_perturb_possible(m);
        auto x0 = detail::solve_starts(m);
        if (x0.size() != p.root_count()) throw UsageError("start vector length does not match the problem");

        const auto t0 = std::chrono::steady_clock::now();
        const auto traj = run(p, m.solver, std::move(x0));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        const auto metrics = compute_run_metrics(p, traj, m.solver.tol, dt.count());

        // Column k holds the component matched to reference root k.
        const std::size_t n = p.root_count();
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        if (const auto& refs = p.reference_roots()) {
            const auto match = match_roots(traj.final_iterate(), *refs);
            for (std::size_t i = 0; i < n; ++i) order[match.assignment[i]] = i;
        }

        if (m.emit & io::kEmitCsv) {
            io::CsvTable t;
            t.header.push_back("h");
            for (std::size_t k = 0; k < n; ++k) {
                t.header.push_back("x" + std::to_string(k + 1) + "_re");
                t.header.push_back("x" + std::to_string(k + 1) + "_im");
            }
            t.header.push_back("step_norm");
            t.header.push_back("residual_norm");
            for (std::size_t h = 0; h < traj.iterates.size(); ++h) {
                const auto& x = traj.iterates[h];
                std::vector<io::Cell> row{static_cast<double>(h)};
                for (std::size_t k = 0; k < n; ++k) {
                    row.emplace_back(x[order[k]].real());
                    row.emplace_back(x[order[k]].imag());
                }
                if (h < traj.step_norms.size()) {
                    row.emplace_back(traj.step_norms[h]);
                } else {
                    row.emplace_back(io::Empty{});
                }
                row.emplace_back(residual_norm(p, x));
                t.rows.push_back(std::move(row));
            }
            io::write_file(detail::out_path(m, "trajectory.csv"), io::to_csv(t));
        }
        if (m.emit & io::kEmitJson) {
            io::write_file(detail::out_path(m, "metrics.json"), io::dump(io::to_json(metrics)));
        }

        out << "status " << to_string(traj.status) << " after " << traj.iterations() << " iterations, residual "
            << io::format_double(metrics.residual);
        if (metrics.max_error) out << ", max error " << io::format_double(*metrics.max_error);
        out << '\n';
        const auto& xf = traj.final_iterate();
        for (std::size_t k = 0; k < n; ++k) out << "  x" << k + 1 << " = " << io::format_complex(xf[order[k]]) << '\n';

        switch (traj.status) {
            case RunStatus::Converged: return static_cast<int>(kExitOk);
            case RunStatus::Diverged: return static_cast<int>(kExitDiverged);
            case RunStatus::MaxIterReached: break;
        }
        return static_cast<int>(kExitMaxIter);
    });
}

/// profile.csv + scores.json for the manifest's (alpha, beta).
inline int cmd_profile(const io::Manifest& m, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto& p = detail::require_problem(m);
        detail::check_perturb_possible(m);
        const auto ens = profile_pair(p, m.solver, m.profiling, m.n_ens, m.seed, detail::ensemble_init(m), m.workers);
        if (ens.scorable_launches == 0) {
            err << "error: no scorable profile (every launch took fewer than " << m.profiling.window + 1
                << " steps)\n";
            return static_cast<int>(kExitNoScorable);
        }
        if (m.emit & io::kEmitCsv) {
            io::CsvTable t{{"t_end", "mean", "std", "count"}, {}};
            const auto& a = ens.profile;
            for (std::size_t k = 0; k < a.t_end.size(); ++k) {
                t.rows.push_back({static_cast<double>(a.t_end[k]), a.mean[k], a.stddev[k],
                                  static_cast<double>(a.count[k])});
            }
            io::write_file(detail::out_path(m, "profile.csv"), io::to_csv(t));
        }
        if (m.emit & io::kEmitJson) {
            io::write_file(detail::out_path(m, "scores.json"), io::dump(io::to_json(ens.scores)));
        }
        out << to_string(m.solver.method) << " alpha=" << io::format_double(m.solver.alpha)
            << " beta=" << io::format_double(m.solver.beta) << ": s_min " << io::format_double(ens.scores.s_min)
            << ", s_mom " << io::format_double(ens.scores.s_mom) << " (" << ens.scorable_launches << "/" << ens.n_ens
            << " scorable, " << ens.converged_launches << " converged)\n";
        return static_cast<int>(kExitOk);
    });
}

inline GridSpec grid_from_manifest(const io::Manifest& m) {
    if (!m.grid_alpha || !m.grid_beta) throw UsageError("scan needs both grid axes (alpha and beta)");
    GridSpec g;
    g.alpha_min = m.grid_alpha->lo;
    g.alpha_max = m.grid_alpha->hi;
    g.n_alpha = m.grid_alpha->count;
    g.beta_min = m.grid_beta->lo;
    g.beta_max = m.grid_beta->hi;
    g.n_beta = m.grid_beta->count;
    g.n_ens = m.n_ens;
    g.master_seed = m.seed;
    g.init_mode = detail::ensemble_init(m);
    return g;
}

/// Heatmaps, images with a bounds sidecar, and selection.json.
inline int cmd_scan(const io::Manifest& m, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto& p = detail::require_problem(m);
        detail::check_perturb_possible(m);
        const auto grid = grid_from_manifest(m);
        const auto res = scan(p, m.solver, grid, m.profiling, m.workers);

        if (res.parameters_inert) {
            err << "warning: " << to_string(m.solver.method) << " ignores alpha and beta; the scan is flat\n";
        }
        for (const auto& c : res.unscorable) {
            err << "warning: cell (" << c.row << ", " << c.col << ") alpha=" << io::format_double(res.alphas[c.row])
                << " beta=" << io::format_double(res.betas[c.col]) << " has no scorable profile\n";
        }

        if (m.emit & io::kEmitCsv) {
            io::write_file(detail::out_path(m, "s_min.csv"), io::to_csv(detail::heatmap_table(res, res.s_min)));
            io::write_file(detail::out_path(m, "s_mom.csv"), io::to_csv(detail::heatmap_table(res, res.s_mom)));
            io::write_file(detail::out_path(m, "convergence.csv"),
                           io::to_csv(detail::heatmap_table(res, res.convergence)));
        }
        if (m.emit & io::kEmitImage) {
            const auto bmin = io::finite_bounds(res.s_min);
            const auto bmom = io::finite_bounds(res.s_mom);
            io::write_file(detail::out_path(m, "s_min.pgm"), io::to_pgm(res.s_min, bmin));
            io::write_file(detail::out_path(m, "s_mom.pgm"), io::to_pgm(res.s_mom, bmom));
            io::Json b;
            b["s_min"] = {{"min", bmin.min}, {"max", bmin.max}};
            b["s_mom"] = {{"min", bmom.min}, {"max", bmom.max}};
            io::write_file(detail::out_path(m, "heatmap_bounds.json"), io::dump(b));
        }
        if (m.emit & io::kEmitJson) {
            auto j = io::to_json(res.selected);
            io::Json cells = io::Json::array();
            for (const auto& c : res.unscorable) cells.push_back({{"row", c.row}, {"col", c.col}});
            j["unscorable_cells"] = cells;
            io::write_file(detail::out_path(m, "selection.json"), io::dump(j));
        }
        out << "selected alpha*=" << io::format_double(res.selected.alpha)
            << " beta*=" << io::format_double(res.selected.beta) << " (cell " << res.selected.cell.row << ", "
            << res.selected.cell.col << "): s_mom " << io::format_double(res.selected.scores.s_mom) << ", s_min "
            << io::format_double(res.selected.scores.s_min) << '\n';
        return static_cast<int>(kExitOk);
    });
}

/// bench.csv + bench.txt, one row per method (all six when none are listed).
inline int cmd_bench(const io::Manifest& m, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const auto& p = detail::require_problem(m);
        detail::check_perturb_possible(m);
        std::vector<MethodId> ids = m.bench_methods;
        if (ids.empty()) ids.assign(kAllMethods.begin(), kAllMethods.end());
        std::vector<SolverConfig> cfgs;
        for (auto id : ids) {
            auto c = m.solver;
            c.method = id;
            cfgs.push_back(c);
        }
        const auto rows = compare_methods(p, std::span<const SolverConfig>(cfgs), detail::bench_starts(m), m.reps,
                                          m.workers);

        io::CsvTable t{{"method", "max_error", "iterations", "emp_order", "convergence_pct", "wall_time_s"}, {}};
        std::vector<std::vector<std::string>> text{
            {"method", "status", "iterations", "residual", "max_error", "emp_order", "CR%", "wall_s"}};
        const auto fixed = [](double v, int prec) {
            std::ostringstream os;
            os << std::setprecision(prec) << v;
            return os.str();
        };
        for (const auto& r : rows) {
            const auto& mm = r.metrics;
            const std::string name(to_string(r.config.method));
            t.rows.push_back({name, detail::opt_cell(mm.max_error), static_cast<double>(mm.iterations),
                              detail::opt_cell(mm.emp_order), mm.convergence_pct, mm.wall_time_seconds});
            text.push_back({name, std::string(to_string(mm.status)), std::to_string(mm.iterations),
                            fixed(mm.residual, 3), mm.max_error ? fixed(*mm.max_error, 3) : "-",
                            mm.emp_order ? fixed(*mm.emp_order, 4) : "-", fixed(mm.convergence_pct, 4),
                            fixed(mm.wall_time_seconds, 3)});
        }
        const auto table = detail::aligned_table(text);
        if (m.emit & io::kEmitCsv) {
            io::write_file(detail::out_path(m, "bench.csv"), io::to_csv(t));
            io::write_file(detail::out_path(m, "bench.txt"), table);
        }
        out << table;
        return static_cast<int>(kExitOk);
    });
}

}  // namespace sabroots::cli
