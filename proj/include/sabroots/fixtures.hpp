#pragma once

// Built-in test problems. The GRN and Hill polynomials are rebuilt from their
// published four-decimal root lists, so the listed roots are exact zeros of
// the fixture polynomials.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sabroots/problem.hpp"

namespace sabroots {

struct Fixture {
    ProblemSpec problem;
    /// Deliberately scattered starting constellation; empty when none is published.
    IterateVector scattered_starts;
};

namespace fixtures {

inline std::vector<Complex> grn7_roots() {
    return {{-2.3027, 1.1133}, {-2.3027, -1.1133}, {-0.5590, 2.4896}, {-0.5590, -2.4896},
            {1.5917, 1.9841},  {1.5917, -1.9841},  {2.5401, 0.0}};
}

inline IterateVector grn7_starts() {
    return {{0.1, 0.0}, {3.8, 0.0}, {0.5, 0.0}, {-5.2, 0.0}, {78.2, 0.0}, {-8.2, 0.0}, {-7.0, -3.4}};
}

inline std::vector<Complex> hill6_roots() {
    return {{-0.577, 1.122}, {-0.577, -1.122}, {0.7421, 1.1190}, {0.7421, -1.1190},
            {-1.2356, 0.0},  {1.4069, 0.0}};
}

inline IterateVector hill6_starts() {
    return {{3.12, 0.0}, {0.12, 0.0}, {0.12, 4.0}, {3.4, -4.4}, {0.0, 6.7}, {8.1, 0.0}};
}

inline std::vector<Complex> expquartic_roots() { return {{-3.0, 0.0}, {-2.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}; }

inline IterateVector expquartic_starts() { return {{50.0, 0.0}, {43.8, 0.0}, {30.5, 0.0}, {-45.2, 0.0}}; }

/// Five roots on a circle of radius 0.45 about 0.1 (adjacent spacing ~0.53):
/// far enough apart relative to 1e-2 start offsets that a third-order step
/// history stays above double-precision rounding for three steps.
inline std::vector<Complex> order5_roots() {
    std::vector<Complex> r;
    for (int k = 0; k < 5; ++k) {
        r.push_back(Complex{0.1, 0.0} + std::polar(0.45, 2.0 * std::numbers::pi * k / 5.0));
    }
    return r;
}

inline Fixture grn7() {
    auto roots = grn7_roots();
    auto p = ProblemSpec::polynomial(poly_from_roots(roots), "grn7");
    p.with_reference_roots(std::move(roots));
    return {std::move(p), grn7_starts()};
}

inline Fixture hill6() {
    auto roots = hill6_roots();
    auto p = ProblemSpec::polynomial(poly_from_roots(roots), "hill6");
    p.with_reference_roots(std::move(roots));
    return {std::move(p), hill6_starts()};
}

inline Fixture expquartic(double theta = 1.0, double c = 1.0) {
    auto p = ProblemSpec::exp_quartic(theta, c, "expquartic");
    if (theta == 1.0 && c == 1.0) p.with_reference_roots(expquartic_roots());
    return {std::move(p), expquartic_starts()};
}

/// x^2 - 1 started from [2, -2].
inline Fixture wdk_demo() {
    auto p = ProblemSpec::polynomial(Polynomial({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}), "wdk_demo");
    p.with_reference_roots({{1.0, 0.0}, {-1.0, 0.0}});
    return {std::move(p), {{2.0, 0.0}, {-2.0, 0.0}}};
}

inline Fixture order5() {
    auto roots = order5_roots();
    auto p = ProblemSpec::polynomial(poly_from_roots(roots), "order5");
    p.with_reference_roots(std::move(roots));
    return {std::move(p), {}};
}

inline const std::vector<std::string_view>& names() {
    static const std::vector<std::string_view> n{"grn7", "hill6", "expquartic", "wdk_demo", "order5"};
    return n;
}

}  // namespace fixtures

inline std::optional<Fixture> find_fixture(std::string_view name) {
    if (name == "grn7") return fixtures::grn7();
    if (name == "hill6") return fixtures::hill6();
    if (name == "expquartic") return fixtures::expquartic();
    if (name == "wdk_demo") return fixtures::wdk_demo();
    if (name == "order5") return fixtures::order5();
    return std::nullopt;
}

}  // namespace sabroots
