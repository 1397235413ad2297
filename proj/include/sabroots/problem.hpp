#pragma once

// Evaluable nonlinear problems: complex polynomials and the exponential of a
// quartic. Every problem returns f and f' together so solvers that need the
// derivative (the SAB3 predictor) pay for a single pass.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace sabroots {

using Complex = std::complex<double>;
using IterateVector = std::vector<Complex>;

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

struct Evaluation {
    Complex value;
    Complex derivative;

    bool finite() const noexcept { return is_finite(value) && is_finite(derivative); }
};

/// Anything a simultaneous solver can iterate on.
template <class P>
concept EvaluableProblem = requires(const P& p, Complex x) {
    { p.evaluate(x) } -> std::convertible_to<Evaluation>;
    { p.root_count() } -> std::convertible_to<std::size_t>;
    { p.root_radius() } -> std::convertible_to<double>;
};

/// Polynomial with complex coefficients stored in ascending degree order.
class Polynomial {
public:
    explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.size() < 2) {
            throw std::invalid_argument("polynomial must have degree >= 1");
        }
        for (const auto& c : coeffs_) {
            if (!is_finite(c)) throw std::invalid_argument("polynomial coefficient is not finite");
        }
        if (coeffs_.back() == Complex{0.0, 0.0}) {
            throw std::invalid_argument("leading polynomial coefficient is zero");
        }
    }

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }
    const Complex& leading() const noexcept { return coeffs_.back(); }

    // Horner with the synthetic derivative carried alongside.
    Evaluation evaluate(Complex x) const noexcept {
        Complex value = coeffs_.back();
        Complex deriv{0.0, 0.0};
        for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
            deriv = deriv * x + value;
            value = value * x + coeffs_[k];
        }
        return {value, deriv};
    }

    double max_coeff_magnitude() const noexcept {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /// Sum of |c_k| |x|^k: the magnitude scale of rounding error in evaluate(x).
    double evaluation_scale(Complex x) const noexcept {
        const double r = std::abs(x);
        double s = 0.0;
        for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * r + std::abs(coeffs_[k]);
        return s;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<Complex> coeffs_;
};

/// 1 + max_{i<n} |c_i / c_n|. Every root lies within this modulus.
inline double cauchy_bound(const Polynomial& p) noexcept {
    const auto c = p.coeffs();
    const double lead = std::abs(p.leading());
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) m = std::max(m, std::abs(c[i]) / lead);
    return 1.0 + m;
}

/// Imaginary parts at or below this fraction of their own coefficient's
/// modulus are dropped.
inline constexpr double kRealifyThreshold = 1e-12;

/// Monic polynomial prod(x - r_i), expanded by incremental convolution.
inline Polynomial poly_from_roots(std::span<const Complex> roots) {
    if (roots.empty()) throw std::invalid_argument("poly_from_roots: empty root list");
    std::vector<Complex> c{Complex{1.0, 0.0}};
    for (const auto& r : roots) {
        if (!is_finite(r)) throw std::invalid_argument("poly_from_roots: non-finite root");
        std::vector<Complex> next(c.size() + 1, Complex{0.0, 0.0});
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    // Per coefficient: a global scale would wipe genuine imaginary parts of
    // the small low-order coefficients when root moduli vary widely.
    for (auto& v : c) {
        if (std::abs(v.imag()) <= kRealifyThreshold * std::abs(v)) v = Complex{v.real(), 0.0};
    }
    return Polynomial(std::move(c));
}

/// f(x) = exp(theta * q(x)) - c with q(x) = x(x-1)(x+2)(x+3).
struct ExpQuartic {
    double theta = 1.0;
    double c = 1.0;

    static Complex quartic(Complex x) noexcept {
        // x^4 + 4x^3 + x^2 - 6x
        return (((x + 4.0) * x + 1.0) * x - 6.0) * x;
    }
    static Complex quartic_derivative(Complex x) noexcept {
        // 4x^3 + 12x^2 + 2x - 6
        return ((4.0 * x + 12.0) * x + 2.0) * x - 6.0;
    }

    Evaluation evaluate(Complex x) const noexcept {
        const Complex e = std::exp(theta * quartic(x));
        return {e - c, theta * quartic_derivative(x) * e};
    }

    /// Cauchy bound of q(x) - ln(c)/theta, whose zeros are the principal-branch roots.
    double root_radius() const noexcept {
        const double shift = std::abs(std::log(Complex{c, 0.0})) / std::abs(theta);
        return 1.0 + std::max({6.0, 1.0, 4.0, shift});
    }

    friend bool operator==(const ExpQuartic&, const ExpQuartic&) = default;
};

/// A named, evaluable problem with a known root count and optional reference roots.
class ProblemSpec {
public:
    using Kind = std::variant<Polynomial, ExpQuartic>;

    static ProblemSpec polynomial(Polynomial p, std::string name = "polynomial") {
        const auto n = p.degree();
        return ProblemSpec(Kind{std::move(p)}, n, std::move(name));
    }

    static ProblemSpec exp_quartic(double theta, double c, std::string name = "expquartic") {
        if (!std::isfinite(theta) || theta == 0.0 || !std::isfinite(c)) {
            throw std::invalid_argument("exp_quartic requires finite nonzero theta and finite c");
        }
        return ProblemSpec(Kind{ExpQuartic{theta, c}}, 4, std::move(name));
    }

    /// Attaches reference roots, checking |f(r)| <= rel_tol * scale(r) for each.
    ProblemSpec& with_reference_roots(std::vector<Complex> roots, double rel_tol = 1e-8) {
        if (roots.size() != root_count_) {
            throw std::invalid_argument("reference root count does not match problem");
        }
        for (const auto& r : roots) {
            const double residual = std::abs(evaluate(r).value);
            if (!(residual <= rel_tol * evaluation_scale(r))) {
                throw std::invalid_argument("reference root fails residual validation");
            }
        }
        reference_roots_ = std::move(roots);
        return *this;
    }

    Evaluation evaluate(Complex x) const noexcept {
        return std::visit([x](const auto& k) { return k.evaluate(x); }, kind_);
    }

    std::size_t root_count() const noexcept { return root_count_; }

    double root_radius() const noexcept {
        if (const auto* p = as_polynomial()) return cauchy_bound(*p);
        return std::get<ExpQuartic>(kind_).root_radius();
    }

    /// Magnitude against which |f(x)| is judged "zero" in validation.
    double evaluation_scale(Complex x) const noexcept {
        if (const auto* p = as_polynomial()) return p->evaluation_scale(x);
        const auto& e = std::get<ExpQuartic>(kind_);
        return std::abs(e.c) + std::abs(std::exp(e.theta * ExpQuartic::quartic(x)));
    }

    const Polynomial* as_polynomial() const noexcept { return std::get_if<Polynomial>(&kind_); }
    const ExpQuartic* as_exp_quartic() const noexcept { return std::get_if<ExpQuartic>(&kind_); }
    const Kind& kind() const noexcept { return kind_; }
    const std::optional<std::vector<Complex>>& reference_roots() const noexcept {
        return reference_roots_;
    }
    const std::string& name() const noexcept { return name_; }

private:
    ProblemSpec(Kind kind, std::size_t n, std::string name)
        : kind_(std::move(kind)), root_count_(n), name_(std::move(name)) {}

    Kind kind_;
    std::size_t root_count_;
    std::optional<std::vector<Complex>> reference_roots_;
    std::string name_;
};

static_assert(EvaluableProblem<ProblemSpec>);

template <EvaluableProblem P>
Evaluation eval_with_derivative(const P& p, Complex x) noexcept {
    return p.evaluate(x);
}

}  // namespace sabroots
