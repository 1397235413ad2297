#pragma once

// Step-log contraction profiling: step norms -> log-ratio trace -> windowed
// profile -> ensemble aggregate -> (S_min, S_mom).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sabroots {

struct ProfilingConfig {
    int window = 10;
    double epsilon = std::numeric_limits<double>::epsilon();  // 2^-52

    void validate() const {
        if (window < 1) throw std::invalid_argument("window must be >= 1");
        if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
            throw std::invalid_argument("epsilon must be positive and finite");
        }
    }
};

struct StepLogTrace {
    std::vector<double> g;
    /// Set when fewer than two step norms were available.
    bool too_short = false;
};

/// g[h] = ln((s[h+1] + eps) / (s[h] + eps)).
inline StepLogTrace steplog_trace(std::span<const double> step_norms, const ProfilingConfig& cfg) {
    StepLogTrace t;
    for (double s : step_norms) {
        if (!std::isfinite(s) || s < 0.0) {
            throw std::invalid_argument("step norms must be finite and non-negative");
        }
    }
    if (step_norms.size() < 2) {
        t.too_short = true;
        return t;
    }
    t.g.reserve(step_norms.size() - 1);
    for (std::size_t h = 0; h + 1 < step_norms.size(); ++h) {
        t.g.push_back(std::log((step_norms[h + 1] + cfg.epsilon) / (step_norms[h] + cfg.epsilon)));
    }
    return t;
}

struct ContractionProfile {
    std::vector<double> values;
    /// 1-based window-end index: t_end[k] = k + W.
    std::vector<int> t_end;

    std::size_t size() const noexcept { return values.size(); }
};

/// Sliding mean of W consecutive trace entries.
inline ContractionProfile windowed_profile(const StepLogTrace& trace, const ProfilingConfig& cfg) {
    cfg.validate();
    const auto w = static_cast<std::size_t>(cfg.window);
    if (trace.g.size() < w) throw std::length_error("trace shorter than window");
    ContractionProfile p;
    const std::size_t len = trace.g.size() - w + 1;
    p.values.reserve(len);
    p.t_end.reserve(len);
    for (std::size_t k = 0; k < len; ++k) {
        // Summed afresh per window so every value is independent of its neighbours.
        double sum = 0.0;
        for (std::size_t j = k; j < k + w; ++j) sum += trace.g[j];
        p.values.push_back(sum / static_cast<double>(w));
        p.t_end.push_back(static_cast<int>(k + w));
    }
    return p;
}

/// Trace and window in one go; nullopt when the run is too short to profile.
inline std::optional<ContractionProfile> profile_from_steps(std::span<const double> step_norms,
                                                            const ProfilingConfig& cfg) {
    const auto trace = steplog_trace(step_norms, cfg);
    if (trace.too_short || trace.g.size() < static_cast<std::size_t>(cfg.window)) return std::nullopt;
    return windowed_profile(trace, cfg);
}

struct AggregatedProfile {
    std::vector<int> t_end;
    std::vector<double> mean;
    std::vector<double> stddev;  ///< population standard deviation
    std::vector<int> count;      ///< launches reaching each t_end

    std::size_t size() const noexcept { return t_end.size(); }
    bool empty() const noexcept { return t_end.empty(); }
};

/// Per-t_end mean and population std over the launches that reach it.
/// Launches are summed in their given order.
inline AggregatedProfile aggregate(std::span<const ContractionProfile> profiles) {
    struct Acc {
        std::vector<double> vals;
    };
    std::map<int, Acc> by_t;
    for (const auto& prof : profiles) {
        for (std::size_t k = 0; k < prof.size(); ++k) by_t[prof.t_end[k]].vals.push_back(prof.values[k]);
    }
    AggregatedProfile agg;
    for (const auto& [t, acc] : by_t) {
        const auto cnt = static_cast<double>(acc.vals.size());
        double sum = 0.0;
        for (double v : acc.vals) sum += v;
        const double mean = sum / cnt;
        double ss = 0.0;
        for (double v : acc.vals) ss += (v - mean) * (v - mean);
        agg.t_end.push_back(t);
        agg.mean.push_back(mean);
        agg.stddev.push_back(std::sqrt(ss / cnt));
        agg.count.push_back(static_cast<int>(acc.vals.size()));
    }
    return agg;
}

struct ScorePair {
    double s_min = 0.0;
    double s_mom = 0.0;
    double y_min = 0.0;
    int t_min = 1;
    double m0 = 0.0;
    double t_bar = 0.0;
};

/// Scores of an aggregated profile. Only the mean enters; ties on the minimum
/// resolve to the earliest t_end.
inline ScorePair score(const AggregatedProfile& agg) {
    if (agg.empty()) throw std::invalid_argument("cannot score an empty profile");
    ScorePair s;
    std::size_t kmin = 0;
    for (std::size_t k = 1; k < agg.size(); ++k) {
        if (agg.mean[k] < agg.mean[kmin]) kmin = k;
    }
    s.y_min = agg.mean[kmin];
    s.t_min = agg.t_end[kmin];
    s.s_min = std::max(0.0, -s.y_min / static_cast<double>(s.t_min));

    double moment = 0.0;
    for (std::size_t k = 0; k < agg.size(); ++k) {
        const double neg = std::max(0.0, -agg.mean[k]);
        s.m0 += neg;
        moment += static_cast<double>(agg.t_end[k]) * neg;
    }
    if (s.m0 > 0.0) {
        s.t_bar = moment / s.m0;
        s.s_mom = s.m0 / s.t_bar;
    }
    return s;
}

}  // namespace sabroots
