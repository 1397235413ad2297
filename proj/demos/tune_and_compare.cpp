// Library walk-through: pick SAB3's (alpha, beta) on the Hill polynomial by
// a small profile scan, then compare it against the other schemes from the
// same near-root starts.

#include <cstdio>
#include <vector>

#include "sabroots/fixtures.hpp"
#include "sabroots/metrics.hpp"
#include "sabroots/tuner.hpp"

int main() {
    using namespace sabroots;
    const auto fx = fixtures::hill6();
    const auto& p = fx.problem;

    GridSpec grid;
    grid.alpha_min = -4.0;
    grid.alpha_max = 12.0;
    grid.n_alpha = 5;
    grid.beta_min = 0.0;
    grid.beta_max = 4.0;
    grid.n_beta = 3;
    grid.n_ens = 8;
    grid.master_seed = 11;

    SolverConfig base;  // SAB3
    const auto res = scan(p, base, grid, ProfilingConfig{});
    std::printf("selected alpha*=%g beta*=%g  s_mom=%.4f s_min=%.4f\n", res.selected.alpha, res.selected.beta,
                res.selected.scores.s_mom, res.selected.scores.s_min);

    std::vector<SolverConfig> cfgs;
    for (auto id : kAllMethods) {
        SolverConfig c = base;
        c.method = id;
        c.alpha = res.selected.alpha;
        c.beta = res.selected.beta;
        cfgs.push_back(c);
    }
    const auto rows =
        compare_methods(p, std::span<const SolverConfig>(cfgs), RandomStarts{PerturbReference{0.05, {}}, 5}, 9);
    std::printf("%-6s %8s %11s %9s %6s\n", "method", "iters", "max_error", "order", "CR%");
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        std::printf("%-6.*s %8zu %11.2e %9.3f %6.1f\n", static_cast<int>(to_string(r.config.method).size()),
                    to_string(r.config.method).data(), m.iterations, m.max_error.value_or(-1.0),
                    m.emp_order.value_or(0.0), m.convergence_pct);
    }
}
