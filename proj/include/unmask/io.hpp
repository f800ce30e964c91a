#pragma once

// Text formats: distribution spec JSON, curve CSV/JSON and schedule JSON.
// Numbers are written shortest-round-trip with '.' as the decimal point, so
// output is byte-identical across runs and locales.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "unmask/dist.hpp"
#include "unmask/info_curve.hpp"
#include "unmask/schedules.hpp"
#include "unmask/zoo.hpp"

namespace unmask {

/// Builds the distribution described by a spec object. Kinds: "explicit"
/// (q, n, pmf), "uniform" (q, n), "affine_code" (q, generator, shift),
/// "rs" (q, n, k, eval_points, shift | seed), "mixture" (weights, components)
/// and "elevated" (base spec, code spec). Throws Parse on malformed input and
/// the constructors' own errors otherwise.
JointPMF dist_from_json(const nlohmann::json& spec);
JointPMF dist_from_text(const std::string& text);

/// The code of an "affine_code" or "rs" spec.
AffineCode code_from_json(const nlohmann::json& spec);

/// Explicit spec {"kind":"explicit","q":..,"n":..,"pmf":[...]}.
nlohmann::json dist_to_json(const JointPMF& p);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

/// `j,Z_bits,H_bits[,Z_stderr]`, rows j = 1..n. When `h` is null the H column
/// is left empty (H cannot be rebuilt from Z alone).
std::string curve_to_csv(const InfoCurve& z, const EntropyCurve* h);
nlohmann::json curve_to_json(const InfoCurve& z, const EntropyCurve* h);

/// Reads either format back; JSON is detected by a leading '{'.
InfoCurve curve_from_text(const std::string& text);

nlohmann::json schedule_to_json(const Schedule& s);

/// Accepts {"steps":[...]} or any report carrying {"schedule":{"steps":[...]}}.
Schedule schedule_from_json(const nlohmann::json& j);
Schedule schedule_from_text(const std::string& text);

/// Comma-separated step list such as "4,2,1,1".
Schedule schedule_from_list(const std::string& list);

nlohmann::json plan_to_json(const ScheduleReport& report);
ScheduleReport plan_from_json(const nlohmann::json& j);

}  // namespace unmask
