#pragma once

// Run manifests: `[section]` headers, `key = value` lines, `#` or `;`
// comments. Unknown sections and keys are rejected so typos surface early.
// Every error carries the offending line number.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sabroots/fixtures.hpp"
#include "sabroots/io/format.hpp"
#include "sabroots/profiling.hpp"
#include "sabroots/solvers.hpp"
#include "sabroots/tuner.hpp"

namespace sabroots::io {

class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct ConfigEntry {
    std::string value;
    int line = 0;
};

class ConfigDocument {
public:
    using Section = std::map<std::string, ConfigEntry>;

    static ConfigDocument parse(std::string_view text) {
        static const std::map<std::string, std::set<std::string>> known{
            {"problem", {"fixture", "coeffs", "roots", "kind", "theta", "c", "reference_roots"}},
            {"solver", {"method", "alpha", "beta", "tol", "max_iter", "blowup_cap", "jitter", "predictor"}},
            {"start", {"mode", "values", "radius", "sigma"}},
            {"profiling", {"window", "epsilon"}},
            {"ensemble", {"n_ens", "seed"}},
            {"grid", {"alpha", "beta"}},
            {"bench", {"methods", "reps"}},
            {"output", {"dir", "emit", "workers"}},
        };
        ConfigDocument doc;
        std::string current;
        int lineno = 0;
        for (auto raw : split(text, '\n')) {
            ++lineno;
            const auto cut = raw.find_first_of("#;");
            auto line = trim(raw.substr(0, cut));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError(lineno, "malformed section header");
                current = std::string(trim(line.substr(1, line.size() - 2)));
                if (!known.contains(current)) throw ConfigError(lineno, "unknown section [" + current + "]");
                doc.sections_[current];
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError(lineno, "expected key = value");
            if (current.empty()) throw ConfigError(lineno, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) throw ConfigError(lineno, "empty key");
            if (!known.at(current).contains(key)) {
                throw ConfigError(lineno, "unknown key '" + key + "' in [" + current + "]");
            }
            auto& sec = doc.sections_[current];
            if (sec.contains(key)) throw ConfigError(lineno, "duplicate key '" + key + "'");
            sec[key] = {value, lineno};
        }
        return doc;
    }

    const ConfigEntry* find(const std::string& section, const std::string& key) const {
        const auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        const auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    bool has_section(const std::string& section) const { return sections_.contains(section); }

private:
    std::map<std::string, Section> sections_;
};

// Typed readers.

inline double entry_double(const ConfigEntry& e, std::string_view what) {
    const auto v = parse_double(e.value);
    if (!v) throw ConfigError(e.line, std::string(what) + ": expected a number, got '" + e.value + "'");
    return *v;
}

inline long long entry_int(const ConfigEntry& e, std::string_view what) {
    const auto v = parse_int(e.value);
    if (!v) throw ConfigError(e.line, std::string(what) + ": expected an integer, got '" + e.value + "'");
    return *v;
}

inline std::vector<Complex> entry_complex_list(const ConfigEntry& e, std::string_view what) {
    std::vector<Complex> out;
    for (auto item : split(e.value, ',')) {
        const auto z = parse_complex(item);
        if (!z) {
            throw ConfigError(e.line, std::string(what) + ": bad complex literal '" + std::string(trim(item)) + "'");
        }
        out.push_back(*z);
    }
    return out;
}

struct AxisSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
};

/// "lo:hi:count"
inline std::optional<AxisSpec> parse_axis(std::string_view s) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) return std::nullopt;
    const auto lo = parse_double(parts[0]);
    const auto hi = parse_double(parts[1]);
    const auto n = parse_int(parts[2]);
    if (!lo || !hi || !n || *n < 1 || *lo > *hi) return std::nullopt;
    return AxisSpec{*lo, *hi, static_cast<int>(*n)};
}

enum class StartMode { Default, Scattered, Values, Disk, Perturb };

struct StartSpec {
    StartMode mode = StartMode::Default;
    IterateVector values;
    std::optional<double> radius;
    double sigma = 0.05;
};

enum Emit : unsigned { kEmitCsv = 1u, kEmitJson = 2u, kEmitImage = 4u, kEmitAll = 7u };

inline std::optional<unsigned> parse_emit(std::string_view s) {
    unsigned mask = 0;
    for (auto item : split(s, ',')) {
        const auto t = trim(item);
        if (t == "csv") {
            mask |= kEmitCsv;
        } else if (t == "json") {
            mask |= kEmitJson;
        } else if (t == "image") {
            mask |= kEmitImage;
        } else {
            return std::nullopt;
        }
    }
    return mask;
}

inline std::optional<std::vector<MethodId>> parse_method_list(std::string_view s) {
    std::vector<MethodId> out;
    for (auto item : split(s, ',')) {
        const auto m = parse_method(trim(item));
        if (!m) return std::nullopt;
        out.push_back(*m);
    }
    return out;
}

inline std::string valid_method_ids() {
    std::string s;
    for (auto m : kAllMethods) {
        if (!s.empty()) s += ", ";
        s += to_string(m);
    }
    return s;
}

struct Manifest {
    std::optional<ProblemSpec> problem;
    IterateVector scattered_starts;
    SolverConfig solver;
    ProfilingConfig profiling;
    std::optional<AxisSpec> grid_alpha;
    std::optional<AxisSpec> grid_beta;
    int n_ens = 50;
    std::uint64_t seed = 0;
    StartSpec start;
    std::string output_dir = "out";
    unsigned emit = kEmitAll;
    unsigned workers = 0;
    std::vector<MethodId> bench_methods;
    int reps = 1;

    bool has_grid() const noexcept { return grid_alpha.has_value() || grid_beta.has_value(); }
};

inline Fixture fixture_or_throw(const std::string& name, int line = 0) {
    auto f = find_fixture(name);
    if (!f) {
        std::string known;
        for (auto n : fixtures::names()) known += (known.empty() ? "" : ", ") + std::string(n);
        throw ConfigError(line, "unknown fixture '" + name + "' (known: " + known + ")");
    }
    return *f;
}

inline void set_fixture(Manifest& m, const std::string& name, int line = 0) {
    auto f = fixture_or_throw(name, line);
    m.problem = std::move(f.problem);
    m.scattered_starts = std::move(f.scattered_starts);
}

inline Manifest manifest_from_config(const ConfigDocument& doc) {
    Manifest m;

    // [problem]: exactly one of fixture / coeffs / roots / kind.
    const ConfigEntry* source = nullptr;
    for (const char* key : {"fixture", "coeffs", "roots", "kind"}) {
        if (const auto* e = doc.find("problem", key)) {
            if (source) throw ConfigError(e->line, "more than one problem source given");
            source = e;
        }
    }
    if (const auto* e = doc.find("problem", "fixture")) {
        set_fixture(m, e->value, e->line);
    } else if (const auto* e = doc.find("problem", "coeffs")) {
        try {
            m.problem = ProblemSpec::polynomial(Polynomial(entry_complex_list(*e, "coeffs")), "custom");
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    } else if (const auto* e = doc.find("problem", "roots")) {
        auto roots = entry_complex_list(*e, "roots");
        try {
            m.problem = ProblemSpec::polynomial(poly_from_roots(roots), "custom");
            m.problem->with_reference_roots(std::move(roots));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    } else if (const auto* e = doc.find("problem", "kind")) {
        if (e->value != "exp_quartic") throw ConfigError(e->line, "unknown problem kind '" + e->value + "'");
        const auto* th = doc.find("problem", "theta");
        const auto* c = doc.find("problem", "c");
        const double theta = th ? entry_double(*th, "theta") : 1.0;
        const double cv = c ? entry_double(*c, "c") : 1.0;
        try {
            auto f = fixtures::expquartic(theta, cv);
            m.problem = std::move(f.problem);
            m.scattered_starts = std::move(f.scattered_starts);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    }
    if (const auto* e = doc.find("problem", "reference_roots")) {
        if (!m.problem) throw ConfigError(e->line, "reference_roots given without a problem");
        try {
            m.problem->with_reference_roots(entry_complex_list(*e, "reference_roots"));
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e->line, ex.what());
        }
    }

    // [solver]
    if (const auto* e = doc.find("solver", "method")) {
        const auto id = parse_method(e->value);
        if (!id) throw ConfigError(e->line, "unknown method '" + e->value + "' (valid: " + valid_method_ids() + ")");
        m.solver.method = *id;
    }
    if (const auto* e = doc.find("solver", "alpha")) m.solver.alpha = entry_double(*e, "alpha");
    if (const auto* e = doc.find("solver", "beta")) m.solver.beta = entry_double(*e, "beta");
    if (const auto* e = doc.find("solver", "tol")) m.solver.tol = entry_double(*e, "tol");
    if (const auto* e = doc.find("solver", "max_iter")) m.solver.max_iter = static_cast<int>(entry_int(*e, "max_iter"));
    if (const auto* e = doc.find("solver", "blowup_cap")) m.solver.blowup_cap = entry_double(*e, "blowup_cap");
    if (const auto* e = doc.find("solver", "jitter")) m.solver.jitter = entry_double(*e, "jitter");
    if (const auto* e = doc.find("solver", "predictor")) {
        if (e->value == "damped") {
            m.solver.predictor = PredictorMode::Damped;
        } else if (e->value == "identity") {
            m.solver.predictor = PredictorMode::Identity;
        } else {
            throw ConfigError(e->line, "predictor must be 'damped' or 'identity'");
        }
    }
    try {
        m.solver.validate();
    } catch (const std::invalid_argument& ex) {
        const auto* e = doc.find("solver", "tol");
        throw ConfigError(e ? e->line : 0, ex.what());
    }

    // [start]
    if (const auto* e = doc.find("start", "mode")) {
        if (e->value == "scattered") {
            m.start.mode = StartMode::Scattered;
        } else if (e->value == "values") {
            m.start.mode = StartMode::Values;
        } else if (e->value == "disk") {
            m.start.mode = StartMode::Disk;
        } else if (e->value == "perturb") {
            m.start.mode = StartMode::Perturb;
        } else {
            throw ConfigError(e->line, "start mode must be scattered, values, disk or perturb");
        }
    }
    if (const auto* e = doc.find("start", "values")) {
        m.start.values = entry_complex_list(*e, "values");
        if (m.start.mode == StartMode::Default) m.start.mode = StartMode::Values;
        if (m.problem && m.start.values.size() != m.problem->root_count()) {
            throw ConfigError(e->line, "start values: expected " + std::to_string(m.problem->root_count()) +
                                           " entries, got " + std::to_string(m.start.values.size()));
        }
    }
    if (m.start.mode == StartMode::Values && m.start.values.empty()) {
        throw ConfigError(doc.find("start", "mode")->line, "start mode 'values' needs a values key");
    }
    if (const auto* e = doc.find("start", "radius")) {
        m.start.radius = entry_double(*e, "radius");
        if (!(*m.start.radius >= 0.0)) throw ConfigError(e->line, "radius must be >= 0");
    }
    if (const auto* e = doc.find("start", "sigma")) {
        m.start.sigma = entry_double(*e, "sigma");
        if (!(m.start.sigma >= 0.0)) throw ConfigError(e->line, "sigma must be >= 0");
    }

    // [profiling]
    if (const auto* e = doc.find("profiling", "window")) {
        m.profiling.window = static_cast<int>(entry_int(*e, "window"));
        if (m.profiling.window < 1) throw ConfigError(e->line, "window must be >= 1");
    }
    if (const auto* e = doc.find("profiling", "epsilon")) {
        m.profiling.epsilon = entry_double(*e, "epsilon");
        if (!(m.profiling.epsilon > 0.0)) throw ConfigError(e->line, "epsilon must be positive");
    }

    // [ensemble]
    if (const auto* e = doc.find("ensemble", "n_ens")) {
        m.n_ens = static_cast<int>(entry_int(*e, "n_ens"));
        if (m.n_ens < 1) throw ConfigError(e->line, "n_ens must be >= 1");
    }
    if (const auto* e = doc.find("ensemble", "seed")) {
        const auto v = parse_int(e->value);
        if (!v || *v < 0) throw ConfigError(e->line, "seed must be a non-negative integer");
        m.seed = static_cast<std::uint64_t>(*v);
    }

    // [grid]
    for (const char* key : {"alpha", "beta"}) {
        if (const auto* e = doc.find("grid", key)) {
            const auto ax = parse_axis(e->value);
            if (!ax) throw ConfigError(e->line, std::string("grid ") + key + ": expected lo:hi:count");
            (std::string_view(key) == "alpha" ? m.grid_alpha : m.grid_beta) = *ax;
        }
    }

    // [bench]
    if (const auto* e = doc.find("bench", "methods")) {
        const auto ms = parse_method_list(e->value);
        if (!ms) throw ConfigError(e->line, "unknown method in list (valid: " + valid_method_ids() + ")");
        m.bench_methods = *ms;
    }
    if (const auto* e = doc.find("bench", "reps")) {
        m.reps = static_cast<int>(entry_int(*e, "reps"));
        if (m.reps < 1) throw ConfigError(e->line, "reps must be >= 1");
    }

    // [output]
    if (const auto* e = doc.find("output", "dir")) m.output_dir = e->value;
    if (const auto* e = doc.find("output", "emit")) {
        const auto mask = parse_emit(e->value);
        if (!mask) throw ConfigError(e->line, "emit accepts csv, json, image");
        m.emit = *mask;
    }
    if (const auto* e = doc.find("output", "workers")) {
        const auto v = entry_int(*e, "workers");
        if (v < 0) throw ConfigError(e->line, "workers must be >= 0");
        m.workers = static_cast<unsigned>(v);
    }
    return m;
}

inline Manifest load_manifest(std::string_view text) { return manifest_from_config(ConfigDocument::parse(text)); }

}  // namespace sabroots::io
