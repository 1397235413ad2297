// Text formats: numbers, complex literals, CSV, manifests, PGM, JSON views.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <string>

#include "sabroots/io/config.hpp"
#include "sabroots/io/csv.hpp"
#include "sabroots/io/json_out.hpp"
#include "sabroots/io/pgm.hpp"

using namespace sabroots;
using namespace sabroots::io;

namespace {

int error_line(std::string_view text) {
    try {
        load_manifest(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("doubles print in shortest round-trip form", "[io]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(100.0) == "100");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(-0.5) == "-0.5");
    std::mt19937_64 g(1);
    for (int k = 0; k < 5000; ++k) {
        double v;
        const auto bits = g();
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) continue;
        REQUIRE(parse_double(format_double(v)) == v);
    }
    CHECK_FALSE(parse_double("1.5x").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK(parse_double(" +2.5 ") == 2.5);
    CHECK(parse_int("42") == 42);
    CHECK_FALSE(parse_int("4.2").has_value());
}

TEST_CASE("complex literals", "[io]") {
    CHECK(parse_complex("3") == Complex{3.0, 0.0});
    CHECK(parse_complex("-2.5i") == Complex{0.0, -2.5});
    CHECK(parse_complex("1+2i") == Complex{1.0, 2.0});
    CHECK(parse_complex("1 - 2i") == Complex{1.0, -2.0});
    CHECK(parse_complex("1e-3-4e+2j") == Complex{1e-3, -4e2});
    CHECK(parse_complex("i") == Complex{0.0, 1.0});
    CHECK(parse_complex("-i") == Complex{0.0, -1.0});
    CHECK(parse_complex("0.12+4i") == Complex{0.12, 4.0});
    CHECK_FALSE(parse_complex("abc").has_value());
    CHECK_FALSE(parse_complex("1+2k").has_value());
    for (const Complex z : {Complex{1.5, -2.0}, Complex{0.0, 3.0}, Complex{-7.0, 0.0}, Complex{1e-20, 1e20}}) {
        CHECK(parse_complex(format_complex(z)) == z);
    }
}

TEST_CASE("CSV round-trips byte for byte", "[io][property]") {
    std::mt19937_64 g(2);
    std::normal_distribution<double> nd(0.0, 1e3);
    std::uniform_int_distribution<int> kind(0, 5);
    for (int trial = 0; trial < 100; ++trial) {
        CsvTable t{{"name", "a", "b", "c"}, {}};
        for (int r = 0; r < 20; ++r) {
            std::vector<Cell> row{std::string("row") + std::to_string(r)};
            for (int c = 0; c < 3; ++c) {
                const int k = kind(g);
                if (k == 0) {
                    row.emplace_back(Empty{});
                } else if (k == 1) {
                    row.emplace_back(std::exp(nd(g) / 50.0));
                } else {
                    row.emplace_back(nd(g));
                }
            }
            t.rows.push_back(std::move(row));
        }
        const auto text = to_csv(t);
        const auto back = parse_csv(text);
        REQUIRE(to_csv(back) == text);
        CHECK(back.rows == t.rows);
    }
    CHECK_THROWS_AS(to_csv(CsvTable{{"a,b"}, {}}), std::invalid_argument);
}

TEST_CASE("manifest parsing", "[io][config]") {
    const auto m = load_manifest(R"(
# comment
[problem]
fixture = hill6   ; trailing comment

[solver]
method = pns4
alpha = 1.5
beta = -2
tol = 1e-10
max_iter = 55
jitter = 0
predictor = identity

[start]
mode = perturb
sigma = 0.02

[profiling]
window = 4
epsilon = 1e-15

[ensemble]
n_ens = 7
seed = 99

[grid]
alpha = -1:1:3
beta = 0:2:2

[bench]
methods = WDK, sab3
reps = 3

[output]
dir = results
emit = csv, image
workers = 2
)");
    REQUIRE(m.problem);
    CHECK(m.problem->name() == "hill6");
    CHECK(m.scattered_starts.size() == 6);
    CHECK(m.solver.method == MethodId::PNS4);
    CHECK(m.solver.alpha == 1.5);
    CHECK(m.solver.beta == -2.0);
    CHECK(m.solver.tol == 1e-10);
    CHECK(m.solver.max_iter == 55);
    CHECK(m.solver.jitter == 0.0);
    CHECK(m.solver.predictor == PredictorMode::Identity);
    CHECK(m.start.mode == StartMode::Perturb);
    CHECK(m.start.sigma == 0.02);
    CHECK(m.profiling.window == 4);
    CHECK(m.profiling.epsilon == 1e-15);
    CHECK(m.n_ens == 7);
    CHECK(m.seed == 99);
    CHECK(m.grid_alpha->count == 3);
    CHECK(m.grid_beta->hi == 2.0);
    CHECK(m.bench_methods == std::vector<MethodId>{MethodId::WDK, MethodId::SAB3});
    CHECK(m.reps == 3);
    CHECK(m.output_dir == "results");
    CHECK(m.emit == (kEmitCsv | kEmitImage));
    CHECK(m.workers == 2);
}

TEST_CASE("manifest problem sources", "[io][config]") {
    const auto c = load_manifest("[problem]\ncoeffs = -1, 0, 1\n");
    CHECK(c.problem->root_count() == 2);
    CHECK_FALSE(c.problem->reference_roots().has_value());

    const auto r = load_manifest("[problem]\nroots = 1, -1, 2i, -2i\n");
    CHECK(r.problem->root_count() == 4);
    CHECK(r.problem->reference_roots()->size() == 4);

    const auto e = load_manifest("[problem]\nkind = exp_quartic\ntheta = 2\nc = 3\n");
    REQUIRE(e.problem->as_exp_quartic());
    CHECK(e.problem->as_exp_quartic()->theta == 2.0);
    CHECK(e.problem->as_exp_quartic()->c == 3.0);

    const auto withref = load_manifest("[problem]\ncoeffs = -1, 0, 1\nreference_roots = 1, -1\n");
    CHECK(withref.problem->reference_roots()->size() == 2);

    for (const auto name : fixtures::names()) {
        const auto f = load_manifest("[problem]\nfixture = " + std::string(name) + "\n");
        CHECK(f.problem->name() == name);
    }
    CHECK_FALSE(load_manifest("").problem.has_value());
}

TEST_CASE("manifest errors carry line numbers", "[io][config]") {
    CHECK(error_line("[problem]\nfixture = nope\n") == 2);
    CHECK(error_line("[problem]\nfixture = grn7\ncoeffs = 1, 1\n") == 3);
    CHECK(error_line("\n\n[solver]\nalpha = abc\n") == 4);
    CHECK(error_line("[solver]\nmethod = newton\n") == 2);
    CHECK(error_line("alpha = 1\n") == 1);
    CHECK(error_line("[nosuch]\n") == 1);
    CHECK(error_line("[solver]\nalpah = 1\n") == 2);
    CHECK(error_line("[solver]\nalpha = 1\nalpha = 2\n") == 3);
    CHECK(error_line("[solver\n") == 1);
    CHECK(error_line("[solver]\njust text\n") == 2);
    CHECK(error_line("[grid]\nalpha = 1:0:3\n") == 2);
    CHECK(error_line("[grid]\nbeta = 0:1\n") == 2);
    CHECK(error_line("[problem]\nfixture = hill6\n[start]\nvalues = 1, 2\n") == 4);
    CHECK(error_line("[problem]\nroots = 1, 1+\n") == 2);
    CHECK(error_line("[problem]\ncoeffs = 1, 0\n") == 2);
    CHECK(error_line("[problem]\ncoeffs = -1, 0, 1\nreference_roots = 3, 4\n") == 3);
    CHECK(error_line("[ensemble]\nn_ens = 0\n") == 2);
    CHECK(error_line("[ensemble]\nseed = -4\n") == 2);
    CHECK(error_line("[output]\nemit = csv, pdf\n") == 2);
    CHECK(error_line("[profiling]\nwindow = 0\n") == 2);
    CHECK(error_line("[start]\nmode = wherever\n") == 2);

    try {
        load_manifest("[solver]\n\ntol = x\n");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
    }
}

TEST_CASE("PGM images", "[io]") {
    Grid2D g(2, 3);
    g.data = {0.0, 0.5, 1.0, 0.25, 0.75, 1.0};
    const auto b = finite_bounds(g);
    CHECK(b.min == 0.0);
    CHECK(b.max == 1.0);
    const auto img = to_pgm(g, b);
    CHECK(img.rfind("P5\n3 2\n255\n", 0) == 0);
    const auto back = parse_pgm(img);
    CHECK(back.width == 3);
    CHECK(back.height == 2);
    REQUIRE(back.pixels.size() == 6);
    CHECK(static_cast<unsigned char>(back.pixels[0]) == 0);
    CHECK(static_cast<unsigned char>(back.pixels[1]) == 128);
    CHECK(static_cast<unsigned char>(back.pixels[2]) == 255);

    Grid2D flat(1, 2, 0.3);
    const auto fimg = parse_pgm(to_pgm(flat, finite_bounds(flat)));
    CHECK(fimg.pixels == std::string(2, '\0'));
}

TEST_CASE("JSON views use the struct field names", "[io]") {
    ScorePair s{0.5, 0.25, -1.0, 2, 1.0, 4.0};
    const auto js = to_json(s);
    std::vector<std::string> keys;
    for (const auto& [k, v] : js.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"s_min", "s_mom", "y_min", "t_min", "m0", "t_bar"});
    CHECK(js["t_min"] == 2);

    RunMetrics m;
    m.residual = 1e-13;
    m.iterations = 7;
    m.status = RunStatus::Diverged;
    const auto jm = to_json(m);
    CHECK(jm["emp_order"].is_null());
    CHECK(jm["max_error"].is_null());
    CHECK(jm["status"] == "Diverged");
    CHECK(jm["per_root_abs_error"].is_array());
    m.residual = std::numeric_limits<double>::infinity();
    CHECK(to_json(m)["residual"].is_null());

    // Doubles survive a dump/parse cycle exactly.
    ScorePair p{0.1 + 0.2, 1.0 / 3.0, -2.0 / 7.0, 5, 1e-300, 123456.789};
    const auto back = Json::parse(dump(to_json(p)));
    CHECK(back["s_min"].get<double>() == p.s_min);
    CHECK(back["s_mom"].get<double>() == p.s_mom);
    CHECK(back["m0"].get<double>() == p.m0);
}
