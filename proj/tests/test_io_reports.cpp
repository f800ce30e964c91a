#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "unmask/error.hpp"
#include "unmask/io.hpp"
#include "unmask/reports.hpp"

using namespace unmask;
using nlohmann::json;

namespace {

std::string spec_text(const std::string& name) {
  std::ifstream in(std::string(UNMASK_SPECS_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kBundled[] = {"rs_q7_n5_k2.json",    "uniform_q2_n6.json",    "correlated_pair.json",
                          "parity_q2_n3.json",   "affine_q3_n4.json",     "mixture_q2_n4.json",
                          "asymmetric_q3_n3.json", "rs_seeded_q5_n4_k2.json", "elevated_q2_rs3.json"};

ErrorCode code_of(auto&& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(Io, BundledSpecsLoad) {
  for (const char* name : kBundled) EXPECT_NO_THROW(dist_from_text(spec_text(name))) << name;
}

TEST(Io, SpecKinds) {
  EXPECT_EQ(dist_from_text(R"({"kind":"uniform","q":3,"n":2})").size(), 9u);
  const JointPMF rs = dist_from_text(R"({"kind":"rs","q":5,"n":3,"k":1,"shift":[1,2,3]})");
  EXPECT_NEAR(rs[rs.encode(std::vector<int>{1, 2, 3})], 0.2, 1e-15);
  const JointPMF seeded = dist_from_text(R"({"kind":"rs","q":5,"n":3,"k":1,"seed":4})");
  EXPECT_EQ(seeded.probs().size(), 125u);
  const JointPMF round = dist_from_json(dist_to_json(rs));
  EXPECT_EQ(std::vector<double>(round.probs().begin(), round.probs().end()),
            std::vector<double>(rs.probs().begin(), rs.probs().end()));
}

TEST(Io, SpecErrors) {
  EXPECT_EQ(code_of([] { dist_from_text("{not json"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"nope"})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"uniform","q":2})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"uniform","q":"two","n":2})"); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"explicit","q":2,"n":1,"pmf":[0.7,0.7]})"); }),
            ErrorCode::kNotADistribution);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"rs","q":6,"n":3,"k":1})"); }),
            ErrorCode::kNotPrime);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"rs","q":5,"n":3,"k":1,"shift":[0,0,0],"seed":1})"); }),
            ErrorCode::kParse);
  EXPECT_EQ(code_of([] { dist_from_text(R"({"kind":"uniform","q":2,"n":30})"); }),
            ErrorCode::kInfeasibleEnumeration);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (double x : {0.0, 1.0, 0.1, 2.807354922057604, 1e-300, 123456.789})
    EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Io, CurveCsvRoundTrip) {
  const JointPMF p = dist_from_text(spec_text("mixture_q2_n4.json"));
  const auto c = compute_curve(p, CurveOptions{});
  const std::string csv = curve_to_csv(c.z, &c.h);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "j,Z_bits,H_bits");
  EXPECT_EQ(curve_from_text(csv).z, c.z.z);
  EXPECT_EQ(curve_from_text(curve_to_json(c.z, &c.h).dump()).z, c.z.z);
}

TEST(Io, CurveCsvWithStderr) {
  const JointPMF p = dist_from_text(spec_text("mixture_q2_n4.json"));
  CurveOptions o;
  o.monte_carlo = true;
  o.samples = 2;
  const auto c = compute_curve(p, o, HanCheck::kLenient);
  const std::string csv = curve_to_csv(c.z, &c.h);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "j,Z_bits,H_bits,Z_stderr");
  const auto back = curve_from_text(csv);
  EXPECT_EQ(back.z, c.z.z);
  EXPECT_EQ(back.z_stderr, c.z.z_stderr);
}

TEST(Io, CurveCsvErrors) {
  EXPECT_THROW(curve_from_text(""), Error);
  EXPECT_THROW(curve_from_text("a,b\n1,2\n"), Error);
  EXPECT_THROW(curve_from_text("j,Z_bits\n2,0.5\n"), Error);
  EXPECT_THROW(curve_from_text("j,Z_bits\n1,x\n"), Error);
}

TEST(Io, ScheduleAndPlanRoundTrip) {
  EXPECT_EQ(schedule_from_list("4, 2,1,1").steps(), (std::vector<int>{4, 2, 1, 1}));
  EXPECT_THROW(schedule_from_list("4,,1"), Error);
  const Schedule s({4, 5, 2, 2});
  EXPECT_EQ(schedule_to_json(s).dump(), R"({"steps":[4,5,2,2]})");
  EXPECT_EQ(schedule_from_json(schedule_to_json(s)), s);

  ScheduleReport r{s, 10.7, 2.5, ScheduleSource::kDp, {1, 5, 10, 12}};
  const json j = plan_to_json(r);
  const ScheduleReport back = plan_from_json(j);
  EXPECT_EQ(back.schedule, s);
  EXPECT_DOUBLE_EQ(back.predicted_kl, 10.7);
  EXPECT_EQ(back.nodes, r.nodes);
  EXPECT_EQ(back.source, ScheduleSource::kDp);
  EXPECT_EQ(plan_to_json(back), j);
  EXPECT_EQ(schedule_from_json(j), s);  // plan reports are valid schedule input
}

TEST(Reports, VerifyPassesOnBundledSpecs) {
  for (const char* name : kBundled) {
    const auto report = verify_report(dist_from_text(spec_text(name)), CurveOptions{});
    EXPECT_TRUE(report["passed"].get<bool>()) << name << "\n" << report.dump(2);
  }
}

TEST(Reports, VerifyReportsTinyMonteCarloCurve) {
  const JointPMF p = dist_from_text(spec_text("asymmetric_q3_n3.json"));
  CurveOptions o;
  o.monte_carlo = true;
  o.samples = 1;
  bool any_failed = false;
  for (o.seed = 0; o.seed < 20 && !any_failed; ++o.seed) {
    json report;
    ASSERT_NO_THROW(report = verify_report(p, o));
    any_failed = !report["passed"].get<bool>();
  }
  EXPECT_TRUE(any_failed);
}

TEST(Reports, SimulateTrivialSchedules) {
  const JointPMF pair = dist_from_text(spec_text("correlated_pair.json"));
  const auto one = simulate_report(pair, Schedule::one_shot(2), SimulateOptions{});
  EXPECT_NEAR(one["expected_kl_bits"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(one["formula_kl_bits"].get<double>(), 1.0, 1e-12);
  const JointPMF rs = dist_from_text(spec_text("rs_q7_n5_k2.json"));
  const auto singles = simulate_report(rs, Schedule::all_singles(5), SimulateOptions{});
  EXPECT_NEAR(singles["expected_kl_bits"].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(singles["formula_kl_bits"].get<double>(), 0.0, 1e-12);
  EXPECT_LE(singles["identity_gap"].get<double>(), 1e-8);
}

TEST(Reports, SimulateIdentityOnBundledSpecs) {
  for (const char* name : kBundled) {
    const JointPMF p = dist_from_text(spec_text(name));
    const auto r = simulate_report(p, tc_schedule(1.0, 0.5, p.n()), SimulateOptions{});
    EXPECT_LE(r["identity_gap"].get<double>(), 1e-8) << name;
  }
}

TEST(Reports, SweepUniformPicksOneShot) {
  const auto r = sweep_report(dist_from_text(spec_text("uniform_q2_n6.json")), 0.5,
                              GridBound::kValue);
  EXPECT_EQ(r["best"]["kind"], "one_shot");
  EXPECT_DOUBLE_EQ(r["best"]["error"].get<double>(), 0.0);
  EXPECT_TRUE(r["guarantee_holds"].get<bool>());
}

TEST(Reports, SweepGuaranteeOnBundledSpecs) {
  for (const char* name : kBundled) {
    const auto r = sweep_report(dist_from_text(spec_text(name)), 0.5, GridBound::kValue);
    EXPECT_TRUE(r["guarantee_holds"].get<bool>()) << name;
    EXPECT_TRUE(r["tc_within_factor_2"].get<bool>()) << name;
    EXPECT_TRUE(r["dtc_within_factor_2"].get<bool>()) << name;
    EXPECT_FALSE(r["best"].is_null()) << name;
  }
}

TEST(Reports, PlanReports) {
  const double l = std::log2(7.0);
  InfoCurve z;
  z.z = {0, 0, l, l, l};
  PlanRequest req;
  req.k = 2;
  const auto dp = plan_report(req, &z);
  EXPECT_EQ(dp["schedule"]["steps"], json::parse("[2,3]"));
  EXPECT_EQ(dp["nodes"], json::parse("[1,3]"));
  EXPECT_DOUBLE_EQ(dp["predicted_kl_bits"].get<double>(), 0.0);
  EXPECT_EQ(dp["source"], "dp");

  PlanRequest tc{PlanMode::kTc, 0, 1.0, 1.0, 8};
  const auto closed = plan_report(tc, nullptr);
  EXPECT_EQ(closed["schedule"]["steps"], json::parse("[4,2,1,1]"));
  EXPECT_TRUE(closed["predicted_is_bound"].get<bool>());
}

TEST(Reports, HardcurveCsv) {
  const auto r = hardcurve_report({256, 512}, 0.0, 0.05);
  const std::string csv = to_csv("hardcurve", r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,eps,k,best_error,ratio");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(Reports, Deterministic) {
  const JointPMF p = dist_from_text(spec_text("mixture_q2_n4.json"));
  SimulateOptions o;
  o.method = KlMethod::kMonteCarlo;
  o.trials = 50;
  o.seed = 9;
  o.draws = 5;
  EXPECT_EQ(simulate_report(p, Schedule({2, 2}), o).dump(),
            simulate_report(p, Schedule({2, 2}), o).dump());
}
