#include "unmask/reports.hpp"

#include <algorithm>
#include <cmath>

#include "unmask/combinatorics.hpp"
#include "unmask/error.hpp"
#include "unmask/io.hpp"
#include "unmask/rng.hpp"
#include "unmask/sampler.hpp"
#include "unmask/stepfit.hpp"

namespace unmask {

using nlohmann::json;

namespace {

// Work cap (partitions x table entries) for the exact expected-KL checks run
// by verify; larger schedules are counted as skipped.
constexpr double kVerifyWorkBudget = 4e6;
constexpr double kIdentityTolerance = 1e-8;
constexpr double kDominanceTolerance = 1e-9;
constexpr double kConvexityTolerance = 1e-10;
constexpr int kMaxExhaustiveScheduleLength = 10;

const char* method_name(const CurveResult& c) {
  return c.h.method == CurveMethod::kExact ? "exact" : "mc";
}

json check(const std::string& name, double deviation, double tolerance, json detail = json::object()) {
  json j{{"name", name},
         {"passed", deviation <= tolerance},
         {"max_deviation", deviation},
         {"tolerance", tolerance}};
  if (!detail.empty()) j["detail"] = std::move(detail);
  return j;
}

}  // namespace

CurveResult compute_curve(const JointPMF& p, const CurveOptions& options, HanCheck check) {
  CurveResult out;
  if (options.monte_carlo) {
    if (options.samples < 1)
      fail(ErrorCode::kInvalidArgument, "the Monte-Carlo curve needs --samples >= 1");
    out.h = entropy_curve_mc(p, options.samples, options.seed, options.dedup);
  } else {
    out.h = entropy_curve_exact(p);
  }
  out.z = info_curve_from_entropy(out.h, check);
  return out;
}

json curve_report(const JointPMF& p, const CurveOptions& options) {
  const CurveResult c = compute_curve(p, options);
  return curve_to_json(c.z, &c.h);
}

json summary_report(const JointPMF& p, const CurveOptions& options) {
  const CurveResult c = compute_curve(p, options);
  const CorrelationSummary s = tc_dtc_from_curve(c.z);
  return {{"n", p.n()},
          {"q", p.q()},
          {"method", method_name(c)},
          {"tc_bits", s.tc},
          {"dtc_bits", s.dtc},
          {"z_n_bits", s.z_n},
          {"tc_direct_bits", tc_direct(p)},
          {"dtc_direct_bits", dtc_direct(p)}};
}

json plan_report(const PlanRequest& request, const InfoCurve* curve) {
  const int n = curve ? curve->n() : request.n;
  std::optional<ScheduleReport> report;
  double round_bound = 0.0;
  switch (request.mode) {
    case PlanMode::kOptimal: {
      if (!curve) fail(ErrorCode::kInvalidArgument, "the optimal plan needs a curve");
      const OptimalNodes opt = optimal_nodes_dp(*curve, request.k);
      report = ScheduleReport{nodes_to_schedule(opt.nodes, n), opt.error, std::nullopt,
                              ScheduleSource::kDp, opt.nodes.nodes};
      break;
    }
    case PlanMode::kTc:
      report = ScheduleReport{tc_schedule(request.hat, request.eps, n), request.eps, std::nullopt,
                              ScheduleSource::kTc, {}};
      round_bound = tc_dtc_round_bound(request.hat, request.eps, n);
      break;
    case PlanMode::kDtc:
      report = ScheduleReport{dtc_schedule(request.hat, request.eps, n), request.eps, std::nullopt,
                              ScheduleSource::kDtc, {}};
      round_bound = tc_dtc_round_bound(request.hat, request.eps, n);
      break;
    case PlanMode::kAustin:
      report = ScheduleReport{austin_schedule(request.hat, request.eps, n), request.eps, std::nullopt,
                              ScheduleSource::kAustin, {}};
      round_bound = austin_round_bound(request.hat, request.eps, n);
      break;
  }
  if (curve) {
    report->predicted_kl = riemann_error(*curve, report->schedule);
    report->bound_licai = licai_bound(tc_dtc_from_curve(*curve), report->schedule.max_step(), n);
  }
  json j = plan_to_json(*report);
  j["predicted_is_bound"] = curve == nullptr && request.mode != PlanMode::kOptimal;
  if (request.mode != PlanMode::kOptimal) {
    j["round_bound"] = round_bound;
    j["eps"] = request.eps;
    j["hat"] = request.hat;
  }
  return j;
}

json simulate_report(const JointPMF& p, const Schedule& s, const SimulateOptions& options) {
  if (s.n() != p.n()) fail(ErrorCode::kDimensionMismatch, "schedule length differs from n");
  const CurveResult c = compute_curve(p, CurveOptions{});
  const double formula = riemann_error(c.z, s);

  bool exact = options.method == KlMethod::kExact;
  if (options.method == KlMethod::kAuto) exact = multinomial(s.steps()) <= kMaxPartitions;

  json j{{"schedule", schedule_to_json(s)}, {"formula_kl_bits", formula}};
  if (exact) {
    const double e = expected_kl_exact(p, s);
    j["method"] = "exact";
    j["expected_kl_bits"] = e;
    j["stderr"] = 0.0;
    j["identity_gap"] = std::abs(e - formula);
  } else {
    const Estimate e = expected_kl_mc(p, s, options.trials, options.seed);
    j["method"] = "mc";
    j["trials"] = options.trials;
    j["expected_kl_bits"] = e.value;
    j["stderr"] = e.std_error;
    j["identity_gap"] = std::abs(e.value - formula);
  }
  if (options.draws > 0) {
    const OracleModel oracle = OracleModel::smoothed(options.eta);
    json draws = json::array();
    for (std::uint64_t i = 0; i < options.draws; ++i)
      draws.push_back(sample_random(p, s, oracle, derive_seed(options.seed, i)));
    j["samples"] = std::move(draws);
  }
  return j;
}

json verify_report(const JointPMF& p, const CurveOptions& options) {
  const CurveResult c = compute_curve(p, options, HanCheck::kLenient);
  const InfoCurve& z = c.z;
  const int n = p.n();
  json checks = json::array();

  // Han monotonicity of the (possibly estimated) curve.
  double han = 0.0;
  for (int j = 1; j <= n; ++j) {
    han = std::max(han, -z[j]);
    if (j > 1) han = std::max(han, z[j - 1] - z[j]);
  }
  checks.push_back(check("han_monotone", han, kHanTolerance,
                         {{"first_violation", find_han_violation(z)}}));

  // TC / DTC: curve values against the direct entropy formulas.
  const CorrelationSummary s = tc_dtc_from_curve(z);
  const double tc_d = tc_direct(p);
  const double dtc_d = dtc_direct(p);
  double slack = 0.0;
  for (double se : z.z_stderr) slack += 4.0 * n * se;
  checks.push_back(check("tc_curve_vs_direct", std::abs(s.tc - tc_d), kIdentityTolerance + slack,
                         {{"curve", s.tc}, {"direct", tc_d}}));
  checks.push_back(check("dtc_curve_vs_direct", std::abs(s.dtc - dtc_d),
                         kIdentityTolerance + slack, {{"curve", s.dtc}, {"direct", dtc_d}}));
  checks.push_back(check("tc_plus_dtc_eq_n_zn", std::abs(tc_d + dtc_d - n * s.z_n),
                         kIdentityTolerance + slack));

  // Li-Cai dominance over every schedule.
  if (n <= kMaxExhaustiveScheduleLength) {
    double worst = -INFINITY;
    std::size_t count = 0;
    for (const auto& steps : compositions(n)) {
      const Schedule sched(steps);
      worst = std::max(worst, riemann_error(z, sched) - licai_bound(s, sched.max_step(), n));
      ++count;
    }
    checks.push_back(check("licai_dominance", std::max(0.0, worst), kDominanceTolerance,
                           {{"schedules", count}}));
  } else {
    json skipped = check("licai_dominance", 0.0, kDominanceTolerance);
    skipped["skipped"] = "n > 10";
    checks.push_back(std::move(skipped));
  }

  // Expected KL identity and convexity over every schedule within budget.
  double gap = 0.0;
  double convex = 0.0;
  double strict = 0.0;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  for (const auto& steps : compositions(n)) {
    const double work = static_cast<double>(multinomial(steps)) * static_cast<double>(p.size());
    if (n > 20 || work > kVerifyWorkBudget) {
      ++skipped;
      continue;
    }
    const Schedule sched(steps);
    const double expected = expected_kl_exact(p, sched);
    const double mix = kl_bits(p, mixture_output_dist(p, sched));
    gap = std::max(gap, std::abs(expected - riemann_error(z, sched)));
    convex = std::max(convex, mix - expected);
    strict = std::max(strict, expected - mix);
    ++checked;
  }
  checks.push_back(check("expected_kl_identity", gap, kIdentityTolerance + slack,
                         {{"schedules", checked}, {"skipped", skipped}}));
  checks.push_back(check("convexity", std::max(0.0, convex), kConvexityTolerance,
                         {{"schedules", checked}, {"skipped", skipped}, {"largest_margin", strict}}));

  bool passed = true;
  for (const auto& ch : checks) passed = passed && ch["passed"].get<bool>();
  return {{"method", method_name(c)}, {"n", n}, {"q", p.q()}, {"passed", passed},
          {"checks", std::move(checks)}};
}

json sweep_report(const JointPMF& p, double eps, GridBound bound) {
  const CurveResult c = compute_curve(p, CurveOptions{});
  const InfoCurve& z = c.z;
  const int n = p.n();
  const CorrelationSummary s = tc_dtc_from_curve(z);
  const auto values = sweep_values(n, p.q(), eps, bound);

  struct Candidate {
    std::string kind;
    double hat;
    Schedule schedule;
    double error;
  };
  std::optional<Candidate> best;
  auto consider = [&](Candidate cand) {
    if (cand.error > eps) return;
    if (!best || cand.schedule.k() < best->schedule.k() ||
        (cand.schedule.k() == best->schedule.k() && cand.error < best->error))
      best = std::move(cand);
  };

  const Schedule one = Schedule::one_shot(n);
  consider({"one_shot", 0.0, one, riemann_error(z, one)});

  json rows = json::array();
  std::size_t violations = 0;
  for (const auto& [tc_hat, dtc_hat] : sweep_grid(n, p.q(), eps, bound)) {
    const Schedule ts = tc_schedule(tc_hat, eps, n);
    const Schedule ds = dtc_schedule(dtc_hat, eps, n);
    const double te = riemann_error(z, ts);
    const double de = riemann_error(z, ds);
    if (s.tc <= tc_hat && te > eps + kDominanceTolerance) ++violations;
    if (s.dtc <= dtc_hat && de > eps + kDominanceTolerance) ++violations;
    consider({"tc", tc_hat, ts, te});
    consider({"dtc", dtc_hat, ds, de});
    rows.push_back({{"tc_hat", tc_hat}, {"dtc_hat", dtc_hat}, {"tc_k", ts.k()},
                    {"tc_error", te}, {"dtc_k", ds.k()}, {"dtc_error", de}});
  }

  auto factor_two = [&](double value) {
    for (double v : values)
      if (v >= value && (v <= 2.0 * value || v == values.front())) return true;
    return false;
  };

  json j{{"n", n},
         {"q", p.q()},
         {"eps", eps},
         {"tc_bits", s.tc},
         {"dtc_bits", s.dtc},
         {"grid", values},
         {"rows", std::move(rows)},
         {"guarantee_holds", violations == 0},
         {"guarantee_violations", violations},
         {"tc_within_factor_2", factor_two(s.tc)},
         {"dtc_within_factor_2", factor_two(s.dtc)}};
  if (best) {
    j["best"] = {{"kind", best->kind},
                 {"hat", best->hat},
                 {"schedule", schedule_to_json(best->schedule)},
                 {"k", best->schedule.k()},
                 {"error", best->error}};
  } else {
    j["best"] = nullptr;
  }
  return j;
}

json hardcurve_report(const std::vector<int>& n_grid, double eps, double c) {
  json rows = json::array();
  for (const auto& r : lower_bound_experiment(n_grid, eps, c))
    rows.push_back({{"n", r.n}, {"eps", r.eps}, {"k", r.k}, {"best_error", r.best_error},
                    {"ratio", r.ratio}, {"in_lemma_range", r.in_lemma_range}});
  return {{"c", c}, {"rows", std::move(rows)}};
}

namespace {

std::string cell(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

std::string table(const json& rows, const std::vector<std::string>& columns) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out += (c ? "," : "") + (row.contains(columns[c]) ? cell(row[columns[c]]) : "");
    out += "\n";
  }
  return out;
}

}  // namespace

std::string to_csv(const std::string& command, const json& report) {
  if (command == "curve") {
    InfoCurve z;
    z.z = report.at("Z_bits").get<std::vector<double>>();
    if (report.contains("Z_stderr")) z.z_stderr = report["Z_stderr"].get<std::vector<double>>();
    EntropyCurve h;
    h.h = {0.0};
    for (double v : report.at("H_bits")) h.h.push_back(v);
    return curve_to_csv(z, &h);
  }
  if (command == "summary")
    return table(json::array({report}), {"n", "q", "method", "tc_bits", "dtc_bits", "z_n_bits",
                                          "tc_direct_bits", "dtc_direct_bits"});
  if (command == "plan") {
    json rows = json::array();
    const auto steps = report.at("schedule").at("steps");
    int node = 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      rows.push_back({{"round", i + 1}, {"step", steps[i]}, {"node", node}});
      node += steps[i].get<int>();
    }
    return table(rows, {"round", "step", "node"});
  }
  if (command == "simulate")
    return table(json::array({report}),
                 {"method", "expected_kl_bits", "stderr", "formula_kl_bits", "identity_gap"});
  if (command == "verify") return table(report.at("checks"), {"name", "passed", "max_deviation", "tolerance"});
  if (command == "sweep")
    return table(report.at("rows"), {"tc_hat", "dtc_hat", "tc_k", "tc_error", "dtc_k", "dtc_error"});
  if (command == "hardcurve") return table(report.at("rows"), {"n", "eps", "k", "best_error", "ratio"});
  fail(ErrorCode::kInvalidArgument, "no CSV form for '" + command + "'");
}

}  // namespace unmask
