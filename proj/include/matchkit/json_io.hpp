#pragma once

#include <json.hpp>

#include "matchkit/conditions.hpp"
#include "matchkit/fluid.hpp"
#include "matchkit/lyapunov.hpp"
#include "matchkit/measure.hpp"
#include "matchkit/oracle.hpp"
#include "matchkit/policy.hpp"
#include "matchkit/product_form.hpp"
#include "matchkit/simulate.hpp"
#include "matchkit/structure.hpp"

namespace matchkit {

using json = nlohmann::json;

// {"nodes": ["1", ...], "edges": [["1","2"], ["2"], ...]}
MatchingStructure structure_from_json(const json& j);
json structure_to_json(const MatchingStructure& s);

// {"mode": "probability"|"intensity", "weights": {"1": 0.25, ...}};
// weights may also sit directly beside "mode".
Measure measure_from_json(const json& j, const MatchingStructure& s);
json measure_to_json(const Measure& m, const MatchingStructure& s);

// {"type": "fcfm" | ... , "beta": ..., "rewards": {"1,2,3": 0.0},
//  "orders": {"2": [1,0,2]}, "inner": {...}}
PolicySpec policy_from_json(const json& j, const MatchingStructure& s);
json policy_to_json(const PolicySpec& p, const MatchingStructure& s);

json condition_report_to_json(const ConditionReport& r, const MatchingStructure& s);
json findings_to_json(const std::vector<NonStabFinding>& f, const MatchingStructure& s);
json stationary_table_to_json(const StationaryTable& t);
json oracle_result_to_json(const OracleResult& r);
json run_result_to_json(const RunResult& r);
json trajectory_to_json(const TrajectoryStats& t);
json kidney_row_to_json(const KidneyRow& row);
json fluid_verdict_to_json(const FluidVerdict& v);
json lyapunov_table_to_json(const LyapunovTable& t);

std::string digest_hex(const std::string& bytes); // fnv-1a 64

} // namespace matchkit
