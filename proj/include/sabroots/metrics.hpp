#pragma once

// Evaluation quantities for finished runs and multi-method comparison tables.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "sabroots/parallel.hpp"
#include "sabroots/problem.hpp"
#include "sabroots/random.hpp"
#include "sabroots/solvers.hpp"
#include "sabroots/tuner.hpp"

namespace sabroots {

/// Order estimate from the last three step norms at or above `tol`:
///   (ln d_k - ln d_{k-1}) / (ln d_{k-1} - ln d_{k-2}).
/// Absent when fewer than three such norms exist, when one of them is zero,
/// or when the denominator is below 1e-9 in magnitude.
inline std::optional<double> empirical_order(std::span<const double> step_norms, double tol = 0.0) {
    std::size_t end = 0;
    while (end < step_norms.size() && step_norms[end] >= tol) ++end;
    if (end < 3) return std::nullopt;
    const double d2 = step_norms[end - 3];
    const double d1 = step_norms[end - 2];
    const double d0 = step_norms[end - 1];
    if (!(d0 > 0.0 && d1 > 0.0 && d2 > 0.0)) return std::nullopt;
    if (!std::isfinite(d0) || !std::isfinite(d1) || !std::isfinite(d2)) return std::nullopt;
    const double den = std::log(d1) - std::log(d2);
    if (std::abs(den) < 1e-9) return std::nullopt;
    return (std::log(d0) - std::log(d1)) / den;
}

struct MatchReport {
    /// assignment[i] = reference index matched to computed component i.
    std::vector<std::size_t> assignment;
    std::vector<double> distances;
    double total = 0.0;
};

/// Minimum-total-distance bijection between computed and reference roots
/// (Hungarian algorithm with potentials, O(n^3)).
inline MatchReport match_roots(std::span<const Complex> computed, std::span<const Complex> reference) {
    if (computed.size() != reference.size()) throw std::invalid_argument("match_roots: length mismatch");
    const std::size_t n = computed.size();
    MatchReport rep;
    if (n == 0) return rep;

    const double inf = std::numeric_limits<double>::infinity();
    const auto cost = [&](std::size_t i, std::size_t j) {
        const double d = std::abs(computed[i] - reference[j]);
        return std::isfinite(d) ? d : std::numeric_limits<double>::max() / (4.0 * static_cast<double>(n));
    };
    // 1-based rows (computed) and columns (reference); column 0 is a sentinel.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        owner[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = owner[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    rep.assignment.assign(n, 0);
    for (std::size_t j = 1; j <= n; ++j) rep.assignment[owner[j] - 1] = j - 1;
    rep.distances.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        rep.distances[i] = std::abs(computed[i] - reference[rep.assignment[i]]);
        rep.total += rep.distances[i];
    }
    return rep;
}

/// 100 * (#Converged) / total.
inline double convergence_pct(std::span<const Trajectory> runs) {
    if (runs.empty()) throw std::invalid_argument("convergence_pct: no trajectories");
    const auto conv = std::count_if(runs.begin(), runs.end(), [](const Trajectory& t) { return t.converged(); });
    return 100.0 * static_cast<double>(conv) / static_cast<double>(runs.size());
}

template <EvaluableProblem P>
double residual_norm(const P& p, std::span<const Complex> x) {
    double sum = 0.0;
    for (const auto& xi : x) sum += std::norm(p.evaluate(xi).value);
    return std::sqrt(sum);
}

struct RunMetrics {
    double residual = 0.0;
    std::size_t iterations = 0;
    std::optional<double> emp_order;
    /// |x - xi| per reference root after matching; empty without references.
    std::vector<double> per_root_abs_error;
    std::optional<double> max_error;
    double convergence_pct = 0.0;
    double wall_time_seconds = 0.0;
    RunStatus status = RunStatus::MaxIterReached;
};

template <EvaluableProblem P>
RunMetrics compute_run_metrics(const P& p, const Trajectory& t, double tol, double wall_time_seconds = 0.0) {
    RunMetrics m;
    m.residual = residual_norm(p, t.final_iterate());
    m.iterations = t.iterations();
    m.emp_order = empirical_order(t.step_norms, tol);
    m.convergence_pct = t.converged() ? 100.0 : 0.0;
    m.wall_time_seconds = wall_time_seconds;
    m.status = t.status;
    if constexpr (requires { p.reference_roots(); }) {
        if (const auto& refs = p.reference_roots()) {
            const auto match = match_roots(t.final_iterate(), *refs);
            m.per_root_abs_error.assign(refs->size(), 0.0);
            for (std::size_t i = 0; i < match.assignment.size(); ++i) {
                m.per_root_abs_error[match.assignment[i]] = match.distances[i];
            }
            m.max_error = *std::max_element(m.per_root_abs_error.begin(), m.per_root_abs_error.end());
        }
    }
    return m;
}

/// Where each comparison launch starts: one fixed vector, or seeded draws
/// shared by all methods (rep r uses derive_seed(seed, 0, 0, r)).
struct RandomStarts {
    InitMode mode;
    std::uint64_t seed = 0;
};
using StartPolicy = std::variant<IterateVector, RandomStarts>;

struct MethodRow {
    SolverConfig config;
    RunMetrics metrics;
    std::vector<RunMetrics> reps;
};

namespace detail {

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline RunMetrics summarize(const std::vector<RunMetrics>& reps) {
    if (reps.size() == 1) return reps.front();
    RunMetrics m;
    std::vector<double> res, its, orders, maxerr, wall;
    double conv = 0.0;
    for (const auto& r : reps) {
        res.push_back(r.residual);
        its.push_back(static_cast<double>(r.iterations));
        if (r.emp_order) orders.push_back(*r.emp_order);
        if (r.max_error) maxerr.push_back(*r.max_error);
        wall.push_back(r.wall_time_seconds);
        conv += r.convergence_pct;
    }
    m.residual = median(res);
    // Lower median keeps iteration counts integral.
    std::sort(its.begin(), its.end());
    m.iterations = static_cast<std::size_t>(its[(its.size() - 1) / 2]);
    if (!orders.empty()) m.emp_order = median(orders);
    if (!maxerr.empty()) m.max_error = median(maxerr);
    if (!reps.front().per_root_abs_error.empty()) {
        const std::size_t n = reps.front().per_root_abs_error.size();
        m.per_root_abs_error.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            std::vector<double> col;
            for (const auto& r : reps) col.push_back(r.per_root_abs_error[k]);
            m.per_root_abs_error[k] = median(col);
        }
    }
    m.wall_time_seconds = median(wall);
    m.convergence_pct = conv / static_cast<double>(reps.size());
    const bool all_conv = std::all_of(reps.begin(), reps.end(), [](const RunMetrics& r) {
        return r.status == RunStatus::Converged;
    });
    m.status = all_conv ? RunStatus::Converged : reps.front().status;
    return m;
}

}  // namespace detail

/// One row per method: median residual/iterations/order/error over reps,
/// mean convergence percentage.
template <EvaluableProblem P>
std::vector<MethodRow> compare_methods(const P& p, std::span<const SolverConfig> methods, const StartPolicy& starts,
                                       int reps = 1, unsigned workers = 0) {
    if (methods.empty()) throw std::invalid_argument("compare_methods: no methods");
    if (reps < 1) throw std::invalid_argument("compare_methods: reps must be >= 1");
    for (const auto& m : methods) {
        m.validate();
        if (m.tol != methods.front().tol || m.max_iter != methods.front().max_iter) {
            throw std::invalid_argument("compare_methods: all configs must share tol and max_iter");
        }
    }
    const auto nrep = static_cast<std::size_t>(reps);
    const auto start_for = [&](std::size_t r) -> IterateVector {
        if (const auto* fixed = std::get_if<IterateVector>(&starts)) return *fixed;
        const auto& rnd = std::get<RandomStarts>(starts);
        return random_initials(p, rnd.mode, derive_seed(rnd.seed, 0, 0, r));
    };

    std::vector<RunMetrics> cells(methods.size() * nrep);
    parallel_for(cells.size(), workers, [&](std::size_t idx) {
        const auto& cfg = methods[idx / nrep];
        auto x0 = start_for(idx % nrep);
        const auto t0 = std::chrono::steady_clock::now();
        const auto traj = run(p, cfg, std::move(x0));
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        cells[idx] = compute_run_metrics(p, traj, cfg.tol, dt.count());
    });

    std::vector<MethodRow> rows;
    for (std::size_t k = 0; k < methods.size(); ++k) {
        MethodRow row;
        row.config = methods[k];
        row.reps.assign(cells.begin() + static_cast<std::ptrdiff_t>(k * nrep),
                        cells.begin() + static_cast<std::ptrdiff_t>((k + 1) * nrep));
        row.metrics = detail::summarize(row.reps);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace sabroots
