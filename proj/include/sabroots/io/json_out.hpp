#pragma once

// JSON views of the result types. Field names match the struct members;
// absent optionals and non-finite numbers become null. Key order is fixed
// (ordered_json) so files are byte-reproducible.

#include <cmath>
#include <optional>

#include <json.hpp>

#include "sabroots/metrics.hpp"
#include "sabroots/profiling.hpp"
#include "sabroots/solvers.hpp"
#include "sabroots/tuner.hpp"

namespace sabroots::io {

using Json = nlohmann::ordered_json;

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json number_or_null(const std::optional<double>& v) { return v ? number_or_null(*v) : Json(nullptr); }

inline Json to_json(const ScorePair& s) {
    Json j;
    j["s_min"] = number_or_null(s.s_min);
    j["s_mom"] = number_or_null(s.s_mom);
    j["y_min"] = number_or_null(s.y_min);
    j["t_min"] = s.t_min;
    j["m0"] = number_or_null(s.m0);
    j["t_bar"] = number_or_null(s.t_bar);
    return j;
}

inline Json to_json(const RunMetrics& m) {
    Json j;
    j["residual"] = number_or_null(m.residual);
    j["iterations"] = m.iterations;
    j["emp_order"] = number_or_null(m.emp_order);
    Json errs = Json::array();
    for (double e : m.per_root_abs_error) errs.push_back(number_or_null(e));
    j["per_root_abs_error"] = errs;
    j["max_error"] = number_or_null(m.max_error);
    j["convergence_pct"] = m.convergence_pct;
    j["wall_time_seconds"] = number_or_null(m.wall_time_seconds);
    j["status"] = std::string(to_string(m.status));
    return j;
}

inline Json to_json(const Selection& s) {
    Json j;
    j["alpha_star"] = s.alpha;
    j["beta_star"] = s.beta;
    j["cell"] = {{"row", s.cell.row}, {"col", s.cell.col}};
    j["scores"] = to_json(s.scores);
    return j;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sabroots::io
