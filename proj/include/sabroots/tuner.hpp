#pragma once

// (alpha, beta) grid scanning: seeded micro-launch ensembles per cell,
// aggregated step-log profiles, score matrices and argmax-S_mom selection.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sabroots/parallel.hpp"
#include "sabroots/problem.hpp"
#include "sabroots/profiling.hpp"
#include "sabroots/random.hpp"
#include "sabroots/solvers.hpp"

namespace sabroots {

/// Uniform points on |z| <= radius; radius defaults to the problem's root radius.
struct DiskRadius {
    std::optional<double> radius;
};

/// center + complex Gaussian noise with E|w|^2 = sigma^2 per component
/// (real and imaginary parts each have std sigma/sqrt(2)). The center
/// defaults to the problem's reference roots.
struct PerturbReference {
    double sigma = 0.0;
    std::optional<IterateVector> center;
};

using InitMode = std::variant<DiskRadius, PerturbReference>;

template <EvaluableProblem P>
IterateVector random_initials(const P& p, const InitMode& mode, std::uint64_t seed) {
    Rng rng(seed);
    IterateVector x;
    const std::size_t n = p.root_count();
    if (const auto* disk = std::get_if<DiskRadius>(&mode)) {
        const double r = disk->radius ? *disk->radius : p.root_radius();
        if (!(r >= 0.0)) throw std::invalid_argument("disk radius must be >= 0");
        x.reserve(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double rho = r * std::sqrt(rng.uniform());
            const double th = 2.0 * std::numbers::pi * rng.uniform();
            x.push_back(std::polar(rho, th));
        }
    } else {
        const auto& pert = std::get<PerturbReference>(mode);
        if (!(pert.sigma >= 0.0)) throw std::invalid_argument("perturbation sigma must be >= 0");
        if (pert.center) {
            x = *pert.center;
        } else if constexpr (requires { p.reference_roots(); }) {
            if (!p.reference_roots()) throw std::invalid_argument("problem has no reference roots to perturb");
            x = *p.reference_roots();
        } else {
            throw std::invalid_argument("perturbation needs an explicit center");
        }
        if (x.size() != n) throw std::invalid_argument("perturbation center has the wrong length");
        if (pert.sigma > 0.0) {
            const double s = pert.sigma / std::numbers::sqrt2;
            for (auto& c : x) {
                const auto [a, b] = rng.normal_pair();
                c += Complex{s * a, s * b};
            }
        }
    }
    separate_duplicates(x, 1e-8 * p.root_radius());
    return x;
}

struct GridSpec {
    double alpha_min = -9.0;
    double alpha_max = 15.0;
    int n_alpha = 25;
    double beta_min = -6.0;
    double beta_max = 12.0;
    int n_beta = 19;
    int n_ens = 50;
    std::uint64_t master_seed = 0;
    InitMode init_mode = DiskRadius{};

    void validate() const {
        if (n_alpha < 1 || n_beta < 1) throw std::invalid_argument("grid axes need >= 1 point");
        if (n_ens < 1) throw std::invalid_argument("n_ens must be >= 1");
        if (!(alpha_min <= alpha_max) || !(beta_min <= beta_max)) {
            throw std::invalid_argument("grid bounds must satisfy min <= max");
        }
        if (!std::isfinite(alpha_min) || !std::isfinite(alpha_max) || !std::isfinite(beta_min) ||
            !std::isfinite(beta_max)) {
            throw std::invalid_argument("grid bounds must be finite");
        }
    }
};

/// Inclusive, uniformly spaced axis; a single point sits at `lo`.
inline std::vector<double> axis_values(double lo, double hi, int count) {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        v[static_cast<std::size_t>(k)] = count == 1 ? lo : lo + (hi - lo) * k / (count - 1);
    }
    if (count > 1) v.back() = hi;
    return v;
}

/// Dense row-major matrix; rows follow alpha, columns follow beta.
struct Grid2D {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Grid2D() = default;
    Grid2D(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

struct CellIndex {
    std::size_t row = 0;
    std::size_t col = 0;
    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Max S_mom, then max S_min, then the first cell in row-major order.
inline CellIndex select_cell(const Grid2D& s_mom, const Grid2D& s_min) {
    if (s_mom.rows == 0 || s_mom.cols == 0) throw std::invalid_argument("empty score matrix");
    if (s_min.rows != s_mom.rows || s_min.cols != s_mom.cols) {
        throw std::invalid_argument("score matrices differ in shape");
    }
    CellIndex best{0, 0};
    for (std::size_t i = 0; i < s_mom.rows; ++i) {
        for (std::size_t j = 0; j < s_mom.cols; ++j) {
            const double m = s_mom(i, j);
            const double bm = s_mom(best.row, best.col);
            if (m > bm || (m == bm && s_min(i, j) > s_min(best.row, best.col))) best = {i, j};
        }
    }
    return best;
}

struct CellScore {
    ScorePair scores;
    /// Every launch was too short to form one window.
    bool unscorable = false;
};

/// Aggregates and scores the launches that produced a profile.
inline CellScore score_cell(std::span<const std::optional<ContractionProfile>> launches) {
    std::vector<ContractionProfile> present;
    for (const auto& l : launches) {
        if (l) present.push_back(*l);
    }
    if (present.empty()) return {ScorePair{}, true};
    return {score(aggregate(present)), false};
}

struct CellOutcome {
    CellScore score;
    double convergence_pct = 0.0;
};

struct Selection {
    CellIndex cell;
    double alpha = 0.0;
    double beta = 0.0;
    ScorePair scores;
};

struct ScanResult {
    std::vector<double> alphas;
    std::vector<double> betas;
    Grid2D s_min;
    Grid2D s_mom;
    Grid2D convergence;
    std::vector<CellIndex> unscorable;
    Selection selected;
    std::vector<ScorePair> cell_scores;  ///< row-major
    /// Set when the base method ignores alpha and beta.
    bool parameters_inert = false;
};

/// Runs the n_ens launches of cell (row, col). Depends only on the grid
/// definition and the cell's indices.
template <EvaluableProblem P>
CellOutcome evaluate_cell(const P& p, const SolverConfig& base_cfg, const GridSpec& grid,
                          const ProfilingConfig& prof, std::size_t row, std::size_t col) {
    const auto alphas = axis_values(grid.alpha_min, grid.alpha_max, grid.n_alpha);
    const auto betas = axis_values(grid.beta_min, grid.beta_max, grid.n_beta);
    SolverConfig cfg = base_cfg;
    cfg.alpha = alphas.at(row);
    cfg.beta = betas.at(col);

    std::vector<std::optional<ContractionProfile>> launches;
    launches.reserve(static_cast<std::size_t>(grid.n_ens));
    int converged = 0;
    for (int e = 0; e < grid.n_ens; ++e) {
        const auto seed = derive_seed(grid.master_seed, row, col, static_cast<std::uint64_t>(e));
        const auto traj = run(p, cfg, random_initials(p, grid.init_mode, seed));
        if (traj.converged()) ++converged;
        launches.push_back(profile_from_steps(traj.step_norms, prof));
    }
    return {score_cell(launches), 100.0 * converged / grid.n_ens};
}

template <EvaluableProblem P>
ScanResult scan(const P& p, const SolverConfig& base_cfg, const GridSpec& grid, const ProfilingConfig& prof,
                unsigned workers = 0) {
    grid.validate();
    prof.validate();
    base_cfg.validate();

    ScanResult res;
    res.alphas = axis_values(grid.alpha_min, grid.alpha_max, grid.n_alpha);
    res.betas = axis_values(grid.beta_min, grid.beta_max, grid.n_beta);
    const std::size_t rows = res.alphas.size();
    const std::size_t cols = res.betas.size();
    res.parameters_inert = base_cfg.method != MethodId::SAB3;

    std::vector<CellOutcome> cells(rows * cols);
    parallel_for(rows * cols, workers, [&](std::size_t idx) {
        cells[idx] = evaluate_cell(p, base_cfg, grid, prof, idx / cols, idx % cols);
    });

    res.s_min = Grid2D(rows, cols);
    res.s_mom = Grid2D(rows, cols);
    res.convergence = Grid2D(rows, cols);
    res.cell_scores.reserve(cells.size());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto& c = cells[i * cols + j];
            res.s_min(i, j) = c.score.scores.s_min;
            res.s_mom(i, j) = c.score.scores.s_mom;
            res.convergence(i, j) = c.convergence_pct;
            res.cell_scores.push_back(c.score.scores);
            if (c.score.unscorable) res.unscorable.push_back({i, j});
        }
    }
    const auto best = select_cell(res.s_mom, res.s_min);
    res.selected = {best, res.alphas[best.row], res.betas[best.col], res.cell_scores[best.row * cols + best.col]};
    return res;
}

/// Ensemble profile for a single (alpha, beta) pair.
struct EnsembleProfile {
    AggregatedProfile profile;
    ScorePair scores;
    std::size_t scorable_launches = 0;
    std::size_t converged_launches = 0;
    std::size_t n_ens = 0;
};

template <EvaluableProblem P>
EnsembleProfile profile_pair(const P& p, const SolverConfig& cfg, const ProfilingConfig& prof, int n_ens,
                             std::uint64_t master_seed, const InitMode& init, unsigned workers = 0) {
    if (n_ens < 1) throw std::invalid_argument("n_ens must be >= 1");
    cfg.validate();
    prof.validate();
    const auto n = static_cast<std::size_t>(n_ens);
    std::vector<std::optional<ContractionProfile>> launches(n);
    std::vector<char> converged(n, 0);
    parallel_for(n, workers, [&](std::size_t e) {
        const auto traj = run(p, cfg, random_initials(p, init, derive_seed(master_seed, 0, 0, e)));
        converged[e] = traj.converged() ? 1 : 0;
        launches[e] = profile_from_steps(traj.step_norms, prof);
    });
    EnsembleProfile out;
    out.n_ens = n;
    std::vector<ContractionProfile> present;
    for (std::size_t e = 0; e < n; ++e) {
        out.converged_launches += static_cast<std::size_t>(converged[e]);
        if (launches[e]) present.push_back(*launches[e]);
    }
    out.scorable_launches = present.size();
    if (!present.empty()) {
        out.profile = aggregate(present);
        out.scores = score(out.profile);
    }
    return out;
}

}  // namespace sabroots
