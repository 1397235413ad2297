#pragma once

// Weierstrass-family simultaneous iterations. Every scheme is a total-step
// (Jacobi) update: all n components of the next iterate are computed from the
// same input vector.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sabroots/problem.hpp"

namespace sabroots {

enum class MethodId { WDK, PNS3, PPS3, BSS3, PNS4, SAB3 };

inline constexpr std::array<MethodId, 6> kAllMethods{MethodId::WDK,  MethodId::PNS3, MethodId::PPS3,
                                                     MethodId::BSS3, MethodId::PNS4, MethodId::SAB3};

constexpr std::string_view to_string(MethodId m) noexcept {
    switch (m) {
        case MethodId::WDK: return "WDK";
        case MethodId::PNS3: return "PNS3";
        case MethodId::PPS3: return "PPS3";
        case MethodId::BSS3: return "BSS3";
        case MethodId::PNS4: return "PNS4";
        case MethodId::SAB3: return "SAB3";
    }
    return "?";
}

inline std::optional<MethodId> parse_method(std::string_view s) {
    std::string up(s);
    for (auto& ch : up) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    for (auto m : kAllMethods) {
        if (up == to_string(m)) return m;
    }
    return std::nullopt;
}

enum class PredictorMode {
    Damped,   ///< z = x - (f/f') / (1 + alpha f / (1 + beta f))
    Identity  ///< z = x; reduces SAB3 to WDK
};

struct SolverConfig {
    MethodId method = MethodId::SAB3;
    double alpha = 0.0;
    double beta = 0.0;
    double tol = 1e-12;
    int max_iter = 100;
    double blowup_cap = 1e15;
    /// Separation forced between near-duplicate components; unset means
    /// 1e-8 * root_radius of the problem.
    std::optional<double> jitter;
    PredictorMode predictor = PredictorMode::Damped;

    void validate() const {
        if (!std::isfinite(alpha) || !std::isfinite(beta)) {
            throw std::invalid_argument("alpha and beta must be finite");
        }
        if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
        if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
        if (!(blowup_cap > 0.0)) throw std::invalid_argument("blowup_cap must be positive");
        if (!(tol < blowup_cap)) throw std::invalid_argument("tol must be below blowup_cap");
        if (jitter && !(*jitter >= 0.0)) throw std::invalid_argument("jitter must be >= 0");
    }
};

template <EvaluableProblem P>
double resolve_jitter(const P& p, const SolverConfig& cfg) {
    return cfg.jitter ? *cfg.jitter : 1e-8 * p.root_radius();
}

/// Pushes any component closer than `jitter` to an earlier one along +re
/// until all pairs are at least `jitter` apart. No-op for jitter == 0.
inline void separate_duplicates(IterateVector& x, double jitter) {
    if (!(jitter > 0.0)) return;
    for (std::size_t j = 1; j < x.size(); ++j) {
        // Each push moves x[j] right by jitter; n pushes always suffice.
        for (std::size_t guard = 0; guard <= x.size(); ++guard) {
            bool clash = false;
            for (std::size_t i = 0; i < j; ++i) {
                if (std::abs(x[j] - x[i]) < jitter) {
                    clash = true;
                    break;
                }
            }
            if (!clash) break;
            x[j] += Complex{jitter, 0.0};
        }
    }
}

inline double step_norm(const IterateVector& a, const IterateVector& b) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
    return std::sqrt(sum);
}

namespace detail {

inline Complex product_except(const IterateVector& x, std::size_t i) {
    Complex prod{1.0, 0.0};
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != i) prod *= x[i] - x[j];
    }
    return prod;
}

}  // namespace detail

/// f(x_i) / prod_{j != i}(x_i - x_j); nullopt when the product vanishes.
template <EvaluableProblem P>
std::optional<Complex> weierstrass_correction(const P& p, const IterateVector& x, std::size_t i) {
    const Complex denom = detail::product_except(x, i);
    if (denom == Complex{0.0, 0.0}) return std::nullopt;
    return p.evaluate(x[i]).value / denom;
}

struct StepResult {
    IterateVector next;
    bool diverged = false;
    /// SAB3 components whose predictor fell back to the identity.
    std::size_t safeguards = 0;
};

/// One total-step update of `x` under `cfg.method`. Near-duplicate components
/// are separated first. A component whose update is not finite keeps its old
/// value and the result is flagged diverged.
template <EvaluableProblem P>
StepResult step(const P& p, const SolverConfig& cfg, IterateVector x) {
    separate_duplicates(x, resolve_jitter(p, cfg));
    const std::size_t n = x.size();

    std::vector<Evaluation> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = p.evaluate(x[i]);

    StepResult out;
    out.next.resize(n);

    // Weierstrass corrections, needed by every scheme except SAB3.
    std::vector<Complex> w;
    if (cfg.method != MethodId::SAB3) {
        w.resize(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = ev[i].value / detail::product_except(x, i);
    }

    std::vector<Complex> z;
    if (cfg.method == MethodId::SAB3) {
        z = x;
        if (cfg.predictor == PredictorMode::Damped) {
            for (std::size_t j = 0; j < n; ++j) {
                const Complex f = ev[j].value;
                if (f == Complex{0.0, 0.0}) continue;
                const Complex fp = ev[j].derivative;
                const Complex inner = 1.0 + cfg.beta * f;
                bool singular = fp == Complex{0.0, 0.0} || inner == Complex{0.0, 0.0};
                Complex damp{};
                if (!singular) {
                    damp = 1.0 + cfg.alpha * f / inner;
                    singular = damp == Complex{0.0, 0.0};
                }
                Complex zj{};
                if (!singular) {
                    zj = x[j] - (f / fp) / damp;
                    singular = !is_finite(zj);
                }
                if (singular) {
                    ++out.safeguards;
                } else {
                    z[j] = zj;
                }
            }
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        Complex xi = x[i];
        Complex upd{};
        switch (cfg.method) {
            case MethodId::WDK:
                upd = xi - w[i];
                break;
            case MethodId::PNS3: {
                // Tanabe form: the weighted Weierstrass sum enters as a
                // multiplicative correction of w_i.
                Complex sum{0.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) sum += w[j] / (x[j] - xi);
                }
                upd = xi - w[i] * (1.0 + sum);
                break;
            }
            case MethodId::PPS3: {
                Complex denom{1.0, 0.0};
                for (std::size_t j = 0; j < i; ++j) denom *= xi - x[j] - w[i];
                for (std::size_t j = i + 1; j < n; ++j) denom *= xi - x[j];
                upd = xi - ev[i].value / denom;
                break;
            }
            case MethodId::BSS3: {
                Complex sum{1.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) sum += w[j] / (xi - x[j]);
                }
                upd = xi - w[i] / sum;
                break;
            }
            case MethodId::PNS4: {
                Complex sum{1.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) sum += w[j] / (xi - w[j] - x[j]);
                }
                upd = xi - w[i] / sum;
                break;
            }
            case MethodId::SAB3: {
                Complex denom{1.0, 0.0};
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) denom *= xi - z[j];
                }
                upd = xi - ev[i].value / denom;
                break;
            }
        }
        if (is_finite(upd)) {
            out.next[i] = upd;
        } else {
            out.next[i] = xi;
            out.diverged = true;
        }
    }
    return out;
}

enum class RunStatus { Converged, MaxIterReached, Diverged };

constexpr std::string_view to_string(RunStatus s) noexcept {
    switch (s) {
        case RunStatus::Converged: return "Converged";
        case RunStatus::MaxIterReached: return "MaxIterReached";
        case RunStatus::Diverged: return "Diverged";
    }
    return "?";
}

struct Trajectory {
    std::vector<IterateVector> iterates;  ///< x^[0..H]
    std::vector<double> step_norms;       ///< s_h = |x^[h+1] - x^[h]|_2, length H
    RunStatus status = RunStatus::MaxIterReached;
    /// Converged: number of steps taken. Diverged: index h of the rejected step.
    std::size_t status_iter = 0;
    std::vector<bool> per_root_converged;
    std::size_t safeguard_count = 0;

    std::size_t iterations() const noexcept { return step_norms.size(); }
    const IterateVector& final_iterate() const { return iterates.back(); }
    bool converged() const noexcept { return status == RunStatus::Converged; }
};

/// Iterates from x0 until the step norm drops below tol, max_iter steps are
/// taken, or a step diverges. A diverging step is not recorded.
template <EvaluableProblem P>
Trajectory run(const P& p, const SolverConfig& cfg, IterateVector x0) {
    cfg.validate();
    if (x0.size() != p.root_count()) {
        throw std::invalid_argument("initial vector length does not match root count");
    }
    const double jitter = resolve_jitter(p, cfg);
    separate_duplicates(x0, jitter);

    Trajectory t;
    t.iterates.push_back(std::move(x0));
    t.status = RunStatus::MaxIterReached;

    const auto within_cap = [&](const IterateVector& v) {
        return std::all_of(v.begin(), v.end(), [&](Complex c) {
            return is_finite(c) && std::abs(c) <= cfg.blowup_cap;
        });
    };

    for (int h = 0; h < cfg.max_iter; ++h) {
        StepResult r = step(p, cfg, t.iterates.back());
        t.safeguard_count += r.safeguards;
        separate_duplicates(r.next, jitter);
        if (r.diverged || !within_cap(r.next)) {
            t.status = RunStatus::Diverged;
            t.status_iter = static_cast<std::size_t>(h);
            break;
        }
        const double s = step_norm(r.next, t.iterates.back());
        t.step_norms.push_back(s);
        t.iterates.push_back(std::move(r.next));
        if (s < cfg.tol) {
            t.status = RunStatus::Converged;
            t.status_iter = t.step_norms.size();
            break;
        }
    }
    if (t.status == RunStatus::MaxIterReached) t.status_iter = t.step_norms.size();

    const std::size_t n = p.root_count();
    t.per_root_converged.assign(n, false);
    if (t.iterates.size() >= 2) {
        const auto& last = t.iterates[t.iterates.size() - 1];
        const auto& prev = t.iterates[t.iterates.size() - 2];
        for (std::size_t i = 0; i < n; ++i) {
            t.per_root_converged[i] = is_finite(last[i]) && std::abs(last[i] - prev[i]) < cfg.tol;
        }
    }
    return t;
}

}  // namespace sabroots
