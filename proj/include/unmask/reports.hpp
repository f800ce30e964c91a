#pragma once

// Composite computations behind the command-line tools. Each returns a JSON
// document; `to_csv` flattens the tabular part of a report.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "unmask/dist.hpp"
#include "unmask/info_curve.hpp"
#include "unmask/schedules.hpp"

namespace unmask {

struct CurveOptions {
  bool monte_carlo = false;
  std::uint64_t samples = 0;  // subsets per level for the Monte-Carlo curve
  std::uint64_t seed = 0;
  bool dedup = false;
};

struct CurveResult {
  EntropyCurve h;
  InfoCurve z;
};

/// Exact curve (n <= 20), or the Monte-Carlo estimate. Han monotonicity is
/// enforced in strict mode, only clamped in lenient mode.
CurveResult compute_curve(const JointPMF& p, const CurveOptions& options,
                          HanCheck check = HanCheck::kStrict);

nlohmann::json curve_report(const JointPMF& p, const CurveOptions& options);

/// tc/dtc/Z_n from the curve, plus the direct entropy formulas.
nlohmann::json summary_report(const JointPMF& p, const CurveOptions& options);

enum class PlanMode { kOptimal, kTc, kDtc, kAustin };

struct PlanRequest {
  PlanMode mode = PlanMode::kOptimal;
  int k = 0;          // optimal mode
  double hat = 0.0;   // tc/dtc/austin modes
  double eps = 0.0;
  int n = 0;          // closed-form modes without a curve
};

/// With a curve the predicted error is the exact left-Riemann error and the
/// Li-Cai bound is attached; without one (closed-form modes only) the
/// predicted error is the eps guarantee.
nlohmann::json plan_report(const PlanRequest& request, const InfoCurve* curve);

enum class KlMethod { kAuto, kExact, kMonteCarlo };

struct SimulateOptions {
  KlMethod method = KlMethod::kAuto;
  std::uint64_t trials = 1000;  // partitions for the Monte-Carlo estimate
  std::uint64_t seed = 0;
  std::uint64_t draws = 0;      // sequences to emit alongside the report
  double eta = 0.0;             // oracle smoothing for the emitted draws
};

nlohmann::json simulate_report(const JointPMF& p, const Schedule& s,
                               const SimulateOptions& options);

/// Identity battery; report["passed"] is true iff every check passes.
nlohmann::json verify_report(const JointPMF& p, const CurveOptions& options);

nlohmann::json sweep_report(const JointPMF& p, double eps, GridBound bound);

nlohmann::json hardcurve_report(const std::vector<int>& n_grid, double eps, double c);

/// CSV rendering of a report produced above, keyed by command name.
std::string to_csv(const std::string& command, const nlohmann::json& report);

}  // namespace unmask
