// Step functions and the driver loop.

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sabroots/fixtures.hpp"
#include "sabroots/solvers.hpp"

using namespace sabroots;
using Catch::Approx;

namespace {

ProblemSpec x2m1() {
    auto p = ProblemSpec::polynomial(Polynomial({{-1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}));
    p.with_reference_roots({{1.0, 0.0}, {-1.0, 0.0}});
    return p;
}

SolverConfig config(MethodId m, double a = 0.0, double b = 0.0) {
    SolverConfig c;
    c.method = m;
    c.alpha = a;
    c.beta = b;
    return c;
}

// Straight transcription of the Weierstrass update, used as oracle.
IterateVector naive_wdk(const ProblemSpec& p, const IterateVector& x) {
    IterateVector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        Complex prod = 1.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (j != i) prod *= x[i] - x[j];
        }
        out[i] = x[i] - p.evaluate(x[i]).value / prod;
    }
    return out;
}

}  // namespace

TEST_CASE("weierstrass_correction hand values", "[solvers]") {
    const auto lin = ProblemSpec::polynomial(Polynomial({{-5.0, 0.0}, {1.0, 0.0}}));
    CHECK(*weierstrass_correction(lin, {{2.0, 0.0}}, 0) == Complex{-3.0, 0.0});

    const auto p = x2m1();
    CHECK(*weierstrass_correction(p, {{2.0, 0.0}, {-2.0, 0.0}}, 0) == Complex{0.75, 0.0});
    CHECK_FALSE(weierstrass_correction(p, {{2.0, 0.0}, {2.0, 0.0}}, 0).has_value());
}

TEST_CASE("duplicate components with jitter 0 diverge", "[solvers]") {
    const auto p = x2m1();
    auto cfg = config(MethodId::WDK);
    cfg.jitter = 0.0;
    const auto s = step(p, cfg, {{2.0, 0.0}, {2.0, 0.0}});
    CHECK(s.diverged);
    const auto t = run(p, cfg, {{2.0, 0.0}, {2.0, 0.0}});
    CHECK(t.status == RunStatus::Diverged);
    CHECK(t.step_norms.empty());

    // With the default jitter the pair is separated and the run proceeds.
    const auto tj = run(p, config(MethodId::WDK), {{2.0, 0.0}, {2.0, 0.0}});
    CHECK(tj.converged());
}

TEST_CASE("WDK step on x^2 - 1", "[solvers]") {
    const auto s = step(x2m1(), config(MethodId::WDK), {{2.0, 0.0}, {-2.0, 0.0}});
    CHECK(s.next[0] == Complex{1.25, 0.0});
    CHECK(s.next[1] == Complex{-1.25, 0.0});
}

TEST_CASE("SAB3 predictor reductions", "[solvers]") {
    const auto p = x2m1();
    // alpha = beta = 0: Newton predictors [1.25, -1.25], then the product update.
    const auto s = step(p, config(MethodId::SAB3), {{2.0, 0.0}, {-2.0, 0.0}});
    CHECK(s.next[0].real() == Approx(2.0 - 12.0 / 13.0).epsilon(1e-15));
    CHECK(s.next[1].real() == Approx(-2.0 + 12.0 / 13.0).epsilon(1e-15));
    CHECK(s.safeguards == 0);

    // A component already at a root keeps z_j = x_j for any (alpha, beta),
    // so the other component sees the pure Weierstrass product there.
    const IterateVector x{{1.0, 0.0}, {-3.0, 0.0}};
    for (double a : {-4.0, 0.0, 13.15}) {
        for (double b : {-2.0, 0.0, 0.4615}) {
            const auto r = step(p, config(MethodId::SAB3, a, b), x);
            CHECK(r.next[0] == Complex{1.0, 0.0});
        }
    }
}

TEST_CASE("SAB3 predictor singularities fall back to identity", "[solvers]") {
    const auto p = x2m1();
    // f'(0) = 0 for x^2 - 1.
    const auto s1 = step(p, config(MethodId::SAB3), {{0.0, 0.0}, {3.0, 0.0}});
    CHECK(s1.safeguards == 1);
    CHECK_FALSE(s1.diverged);

    // 1 + beta f = 0: f(2) = 3, beta = -1/3.
    const auto s2 = step(p, config(MethodId::SAB3, 1.0, -1.0 / 3.0), {{2.0, 0.0}, {-0.5, 0.0}});
    CHECK(s2.safeguards >= 1);
    CHECK_FALSE(s2.diverged);

    // 1 + alpha f / (1 + beta f) = 0: f(2) = 3, beta = 0, alpha = -1/3.
    const auto s3 = step(p, config(MethodId::SAB3, -1.0 / 3.0, 0.0), {{2.0, 0.0}, {-0.5, 0.0}});
    CHECK(s3.safeguards >= 1);
    CHECK_FALSE(s3.diverged);

    // Whole runs through singular predictors keep going.
    const auto t = run(p, config(MethodId::SAB3, -1.0 / 3.0, 0.0), {{2.0, 0.0}, {0.0, 0.0}});
    CHECK(t.safeguard_count >= 1);
    CHECK(t.iterations() >= 1);
}

TEST_CASE("run: WDK on x^2 - 1 matches a brute-force iteration", "[solvers]") {
    const auto p = x2m1();
    auto cfg = config(MethodId::WDK);
    cfg.max_iter = 50;
    const auto t = run(p, cfg, {{2.0, 0.0}, {-2.0, 0.0}});
    REQUIRE(t.converged());
    CHECK(std::abs(t.final_iterate()[0] - 1.0) <= 1e-10);
    CHECK(std::abs(t.final_iterate()[1] + 1.0) <= 1e-10);

    IterateVector x{{2.0, 0.0}, {-2.0, 0.0}};
    for (std::size_t h = 0; h < t.iterations(); ++h) {
        x = naive_wdk(p, x);
        CHECK(x == t.iterates[h + 1]);
    }
}

TEST_CASE("trajectory invariants", "[solvers][property]") {
    const auto fx = fixtures::grn7();
    for (auto m : kAllMethods) {
        for (double a : {-7.5, 6.385, 13.15}) {
            const auto t = run(fx.problem, config(m, a, 0.4615), fx.scattered_starts);
            INFO(to_string(m) << " alpha " << a);
            CHECK(t.step_norms.size() + 1 == t.iterates.size());
            CHECK(std::all_of(t.step_norms.begin(), t.step_norms.end(),
                              [](double s) { return s >= 0.0 && std::isfinite(s); }));
            for (const auto& x : t.iterates) {
                for (const auto& z : x) CHECK(is_finite(z));
            }
            if (t.converged()) CHECK(t.step_norms.back() < 1e-12);
            CHECK(t.per_root_converged.size() == 7);
            if (t.status == RunStatus::MaxIterReached) CHECK(t.iterations() == 100);
        }
    }
}

TEST_CASE("fixed point at the exact roots", "[solvers][property]") {
    const auto p = x2m1();
    const auto h = fixtures::hill6();
    for (auto m : kAllMethods) {
        INFO(to_string(m));
        const auto s = step(p, config(m, 3.0, 1.0), {{1.0, 0.0}, {-1.0, 0.0}});
        CHECK(s.next == IterateVector{{1.0, 0.0}, {-1.0, 0.0}});
        const auto t = run(p, config(m), {{1.0, 0.0}, {-1.0, 0.0}});
        CHECK(t.converged());
        CHECK(t.iterations() == 1);

        // Reconstructed polynomial: roots are zeros only up to rounding.
        const auto roots = *h.problem.reference_roots();
        const auto sh = step(h.problem, config(m, 10.69, 1e-4), roots);
        CHECK(step_norm(sh.next, roots) <= 1e-9);
    }
}

TEST_CASE("permutation equivariance", "[solvers][property]") {
    // PPS3's split products are order dependent by construction and are
    // excluded; see README.
    const auto fx = fixtures::hill6();
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd(0.0, 0.3);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = *fx.problem.reference_roots();
        for (auto& z : x) z += Complex{nd(g), nd(g)};
        std::vector<std::size_t> perm(x.size());
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
        std::shuffle(perm.begin(), perm.end(), g);
        IterateVector xp(x.size());
        for (std::size_t k = 0; k < perm.size(); ++k) xp[k] = x[perm[k]];
        for (auto m : {MethodId::WDK, MethodId::PNS3, MethodId::BSS3, MethodId::PNS4, MethodId::SAB3}) {
            const auto a = step(fx.problem, config(m, 2.0, 0.5), x).next;
            const auto b = step(fx.problem, config(m, 2.0, 0.5), xp).next;
            for (std::size_t k = 0; k < perm.size(); ++k) {
                INFO(to_string(m) << " trial " << trial);
                CHECK(std::abs(b[k] - a[perm[k]]) <= 1e-12 * (1.0 + std::abs(a[perm[k]])));
            }
        }
    }
}

TEST_CASE("SAB3 with identity predictors reproduces WDK exactly", "[solvers][property]") {
    const auto fx = fixtures::grn7();
    auto sab = config(MethodId::SAB3);
    sab.predictor = PredictorMode::Identity;
    const auto a = run(fx.problem, sab, fx.scattered_starts);
    const auto b = run(fx.problem, config(MethodId::WDK), fx.scattered_starts);
    CHECK(a.iterates == b.iterates);
    CHECK(a.step_norms == b.step_norms);
    CHECK(a.status == b.status);
}

TEST_CASE("divergence containment", "[solvers][property]") {
    // GRN from the scattered starts at a hostile pair, and a tiny blowup cap.
    const auto fx = fixtures::grn7();
    auto cfg = config(MethodId::SAB3, -7.5, 9.0);
    cfg.blowup_cap = 50.0;
    const auto t = run(fx.problem, cfg, fx.scattered_starts);
    CHECK(t.status == RunStatus::Diverged);
    CHECK(t.step_norms.size() == t.status_iter);
    for (double s : t.step_norms) CHECK(std::isfinite(s));
    for (const auto& x : t.iterates) {
        for (const auto& z : x) {
            CHECK(is_finite(z));
        }
    }

    // exp overflow produces non-finite f and must stop the run cleanly.
    const auto q = ProblemSpec::exp_quartic(1.0, 1.0);
    const auto tq = run(q, config(MethodId::WDK), {{30.0, 0.0}, {31.0, 0.0}, {-29.0, 0.0}, {40.0, 0.0}});
    CHECK(tq.status == RunStatus::Diverged);
    for (double s : tq.step_norms) CHECK(std::isfinite(s));
}

TEST_CASE("config validation", "[solvers]") {
    auto c = config(MethodId::WDK);
    c.tol = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(MethodId::SAB3, NAN);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(MethodId::WDK);
    c.max_iter = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = config(MethodId::WDK);
    c.tol = 1e20;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK_THROWS_AS(run(x2m1(), config(MethodId::WDK), {{1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("method ids parse case-insensitively", "[solvers]") {
    for (auto m : kAllMethods) CHECK(parse_method(to_string(m)) == m);
    CHECK(parse_method("sab3") == MethodId::SAB3);
    CHECK_FALSE(parse_method("newton").has_value());
}
