#include "unmask/unmask.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "unmask/error.hpp"
#include "unmask/io.hpp"
#include "unmask/reports.hpp"
#include "unmask/rng.hpp"
#include "unmask/sampler.hpp"

struct unmask_dist {
  unmask::JointPMF pmf;
};

struct unmask_curve {
  unmask::InfoCurve z;
  std::optional<unmask::EntropyCurve> h;
};

namespace {

using nlohmann::json;
using unmask::ErrorCode;

thread_local std::string g_last_error;

unmask_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotADistribution: return UNMASK_ERR_NOT_A_DISTRIBUTION;
    case ErrorCode::kPositionOutOfRange: return UNMASK_ERR_POSITION_OUT_OF_RANGE;
    case ErrorCode::kDimensionMismatch: return UNMASK_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kInfeasibleEnumeration: return UNMASK_ERR_INFEASIBLE_ENUMERATION;
    case ErrorCode::kHanViolation: return UNMASK_ERR_HAN_VIOLATION;
    case ErrorCode::kNonMonotoneNodes: return UNMASK_ERR_NON_MONOTONE_NODES;
    case ErrorCode::kInvalidTolerance: return UNMASK_ERR_INVALID_TOLERANCE;
    case ErrorCode::kNotPrime: return UNMASK_ERR_NOT_PRIME;
    case ErrorCode::kRankDeficient: return UNMASK_ERR_RANK_DEFICIENT;
    case ErrorCode::kDuplicateEvalPoints: return UNMASK_ERR_DUPLICATE_EVAL_POINTS;
    case ErrorCode::kFieldTooSmall: return UNMASK_ERR_FIELD_TOO_SMALL;
    case ErrorCode::kInvalidArgument: return UNMASK_ERR_INVALID_ARGUMENT;
    case ErrorCode::kParse: return UNMASK_ERR_PARSE;
  }
  return UNMASK_ERR_INTERNAL;
}

unmask_status set_error(unmask_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
unmask_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return UNMASK_OK;
  } catch (const unmask::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const json::exception& e) {
    return set_error(UNMASK_ERR_PARSE, std::string("Parse: ") + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(UNMASK_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(UNMASK_ERR_INTERNAL, e.what());
  }
}

template <class... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) unmask::fail(ErrorCode::kInvalidArgument, "null argument");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

unmask::Schedule to_schedule(const int* steps, std::size_t len) {
  if (!steps && len > 0) unmask::fail(ErrorCode::kInvalidArgument, "null step array");
  return unmask::Schedule(std::vector<int>(steps, steps + len));
}

void write_steps(const unmask::Schedule& s, int* steps, std::size_t cap, std::size_t* len) {
  require(len);
  *len = s.steps().size();
  if (cap < s.steps().size() || (!steps && cap > 0))
    throw std::length_error("buffer too small");
  std::copy(s.steps().begin(), s.steps().end(), steps);
}

json parse_options(const char* options) {
  if (!options || !*options) return json::object();
  json j = json::parse(options);
  if (!j.is_object()) unmask::fail(ErrorCode::kParse, "options must be a JSON object");
  return j;
}

unmask::CurveOptions curve_options(const json& o) {
  unmask::CurveOptions c;
  const std::string method = o.value("method", "exact");
  if (method != "exact" && method != "mc")
    unmask::fail(ErrorCode::kInvalidArgument, "method must be exact or mc");
  c.monte_carlo = method == "mc";
  c.samples = o.value("samples", std::uint64_t{0});
  c.seed = o.value("seed", std::uint64_t{0});
  c.dedup = o.value("dedup", false);
  return c;
}

std::string render(const std::string& command, const json& report, unmask_format format) {
  if (format == UNMASK_FORMAT_CSV) return unmask::to_csv(command, report);
  return report.dump(2) + "\n";
}

// Buffer-size failures are reported separately from library errors.
template <class F>
unmask_status guarded_buffer(F&& body) {
  try {
    body();
    g_last_error.clear();
    return UNMASK_OK;
  } catch (const std::length_error&) {
    return set_error(UNMASK_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  } catch (...) {
    return guarded([] { throw; });
  }
}

}  // namespace

extern "C" {

const char* unmask_last_error(void) { return g_last_error.c_str(); }

const char* unmask_status_name(unmask_status status) {
  switch (status) {
    case UNMASK_OK: return "Ok";
    case UNMASK_ERR_NOT_A_DISTRIBUTION: return "NotADistribution";
    case UNMASK_ERR_POSITION_OUT_OF_RANGE: return "PositionOutOfRange";
    case UNMASK_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case UNMASK_ERR_INFEASIBLE_ENUMERATION: return "InfeasibleEnumeration";
    case UNMASK_ERR_HAN_VIOLATION: return "HanViolation";
    case UNMASK_ERR_NON_MONOTONE_NODES: return "NonMonotoneNodes";
    case UNMASK_ERR_INVALID_TOLERANCE: return "InvalidTolerance";
    case UNMASK_ERR_NOT_PRIME: return "NotPrime";
    case UNMASK_ERR_RANK_DEFICIENT: return "RankDeficient";
    case UNMASK_ERR_DUPLICATE_EVAL_POINTS: return "DuplicateEvalPoints";
    case UNMASK_ERR_FIELD_TOO_SMALL: return "FieldTooSmall";
    case UNMASK_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case UNMASK_ERR_PARSE: return "Parse";
    case UNMASK_ERR_NULL_ARGUMENT: return "NullArgument";
    case UNMASK_ERR_BUFFER_TOO_SMALL: return "BufferTooSmall";
    case UNMASK_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

void unmask_string_free(char* s) { std::free(s); }

unmask_status unmask_dist_from_json(const char* spec_json, unmask_dist** out) {
  if (!spec_json || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = new unmask_dist{unmask::dist_from_text(spec_json)}; });
}

unmask_status unmask_dist_from_probs(int q, int n, const double* probs, size_t len,
                                     unmask_dist** out) {
  if (!probs || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new unmask_dist{unmask::JointPMF(q, n, std::vector<double>(probs, probs + len))};
  });
}

void unmask_dist_free(unmask_dist* d) { delete d; }
int unmask_dist_q(const unmask_dist* d) { return d ? d->pmf.q() : 0; }
int unmask_dist_n(const unmask_dist* d) { return d ? d->pmf.n() : 0; }

unmask_status unmask_curve_exact(const unmask_dist* d, unmask_curve** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto h = unmask::entropy_curve_exact(d->pmf);
    auto z = unmask::info_curve_from_entropy(h);
    *out = new unmask_curve{std::move(z), std::move(h)};
  });
}

unmask_status unmask_curve_mc(const unmask_dist* d, uint64_t samples, uint64_t seed, int dedup,
                              int lenient, unmask_curve** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    auto h = unmask::entropy_curve_mc(d->pmf, samples, seed, dedup != 0);
    auto z = unmask::info_curve_from_entropy(
        h, lenient ? unmask::HanCheck::kLenient : unmask::HanCheck::kStrict);
    *out = new unmask_curve{std::move(z), std::move(h)};
  });
}

unmask_status unmask_curve_from_values(const double* z, size_t n, unmask_curve** out) {
  if (!z || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    if (n == 0) unmask::fail(ErrorCode::kInvalidArgument, "curve has no values");
    unmask::InfoCurve c;
    c.z.assign(z, z + n);
    *out = new unmask_curve{std::move(c), std::nullopt};
  });
}

unmask_status unmask_curve_from_text(const char* text, unmask_curve** out) {
  if (!text || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = new unmask_curve{unmask::curve_from_text(text), std::nullopt}; });
}

unmask_status unmask_curve_to_text(const unmask_curve* c, unmask_format format, char** out) {
  if (!c || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const unmask::EntropyCurve* h = c->h ? &*c->h : nullptr;
    *out = copy_string(format == UNMASK_FORMAT_CSV ? unmask::curve_to_csv(c->z, h)
                                                   : unmask::curve_to_json(c->z, h).dump(2) + "\n");
  });
}

void unmask_curve_free(unmask_curve* c) { delete c; }
int unmask_curve_n(const unmask_curve* c) { return c ? c->z.n() : 0; }

unmask_status unmask_curve_values(const unmask_curve* c, double* out, size_t cap) {
  if (!c || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  if (cap < c->z.z.size()) return set_error(UNMASK_ERR_BUFFER_TOO_SMALL, "output buffer too small");
  std::copy(c->z.z.begin(), c->z.z.end(), out);
  return UNMASK_OK;
}

unmask_status unmask_curve_summary(const unmask_curve* c, double* tc, double* dtc) {
  if (!c || !tc || !dtc) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto s = unmask::tc_dtc_from_curve(c->z);
    *tc = s.tc;
    *dtc = s.dtc;
  });
}

unmask_status unmask_plan_optimal(const unmask_curve* c, int k, int* steps, size_t cap,
                                  size_t* len, double* error) {
  if (!c || !len || !error) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer([&] {
    const auto opt = unmask::optimal_nodes_dp(c->z, k);
    *error = opt.error;
    write_steps(unmask::nodes_to_schedule(opt.nodes, c->z.n()), steps, cap, len);
  });
}

unmask_status unmask_plan_tc(double tc_hat, double eps, int n, int* steps, size_t cap,
                             size_t* len) {
  if (!len) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer([&] { write_steps(unmask::tc_schedule(tc_hat, eps, n), steps, cap, len); });
}

unmask_status unmask_plan_dtc(double dtc_hat, double eps, int n, int* steps, size_t cap,
                              size_t* len) {
  if (!len) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer(
      [&] { write_steps(unmask::dtc_schedule(dtc_hat, eps, n), steps, cap, len); });
}

unmask_status unmask_plan_austin(double dtc_hat, double eps, int n, int* steps, size_t cap,
                                 size_t* len) {
  if (!len) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer(
      [&] { write_steps(unmask::austin_schedule(dtc_hat, eps, n), steps, cap, len); });
}

unmask_status unmask_riemann_error(const unmask_curve* c, const int* steps, size_t len,
                                   double* out) {
  if (!c || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = unmask::riemann_error(c->z, to_schedule(steps, len)); });
}

unmask_status unmask_licai_bound(const unmask_curve* c, int s_max, double* out) {
  if (!c || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded(
      [&] { *out = unmask::licai_bound(unmask::tc_dtc_from_curve(c->z), s_max, c->z.n()); });
}

unmask_status unmask_expected_kl_exact(const unmask_dist* d, const int* steps, size_t len,
                                       double* out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] { *out = unmask::expected_kl_exact(d->pmf, to_schedule(steps, len)); });
}

unmask_status unmask_expected_kl_mc(const unmask_dist* d, const int* steps, size_t len,
                                    uint64_t trials, uint64_t seed, double* value,
                                    double* std_error) {
  if (!d || !value || !std_error) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto e = unmask::expected_kl_mc(d->pmf, to_schedule(steps, len), trials, seed);
    *value = e.value;
    *std_error = e.std_error;
  });
}

unmask_status unmask_mixture_kl(const unmask_dist* d, const int* steps, size_t len,
                                double* out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    *out = unmask::kl_bits(d->pmf, unmask::mixture_output_dist(d->pmf, to_schedule(steps, len)));
  });
}

unmask_status unmask_sample(const unmask_dist* d, const int* steps, size_t len, double eta,
                            uint64_t seed, int* out, size_t cap) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer([&] {
    if (cap < static_cast<std::size_t>(d->pmf.n())) throw std::length_error("buffer too small");
    const auto x = unmask::sample_random(d->pmf, to_schedule(steps, len),
                                         unmask::OracleModel::smoothed(eta), seed);
    std::copy(x.begin(), x.end(), out);
  });
}

unmask_status unmask_decoupling(const unmask_dist* d, const int* block_of, size_t n, double eta,
                                double* lhs, double* rhs, double* gap) {
  if (!d || !block_of || !lhs || !rhs || !gap)
    return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    if (n != static_cast<std::size_t>(d->pmf.n()))
      unmask::fail(ErrorCode::kDimensionMismatch, "block assignment length differs from n");
    std::vector<std::vector<int>> blocks;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const int b = block_of[pos];
      if (b < 0 || b >= static_cast<int>(n)) unmask::fail(ErrorCode::kInvalidArgument, "bad block");
      if (static_cast<int>(blocks.size()) <= b) blocks.resize(b + 1);
      blocks[b].push_back(static_cast<int>(pos));
    }
    const auto r =
        unmask::decoupling_check(d->pmf, unmask::SubsetSchedule::from_positions(blocks), eta);
    *lhs = r.lhs;
    *rhs = r.rhs;
    *gap = r.gap;
  });
}

unmask_status unmask_report_curve(const unmask_dist* d, const char* options,
                                  unmask_format format, char** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto report = unmask::curve_report(d->pmf, curve_options(parse_options(options)));
    *out = copy_string(render("curve", report, format));
  });
}

unmask_status unmask_report_summary(const unmask_dist* d, const char* options,
                                    unmask_format format, char** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto report = unmask::summary_report(d->pmf, curve_options(parse_options(options)));
    *out = copy_string(render("summary", report, format));
  });
}

unmask_status unmask_report_plan(const unmask_curve* c, const char* options,
                                 unmask_format format, char** out) {
  if (!out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const json o = parse_options(options);
    unmask::PlanRequest r;
    const std::string mode = o.value("mode", "optimal");
    if (mode == "optimal") r.mode = unmask::PlanMode::kOptimal;
    else if (mode == "tc") r.mode = unmask::PlanMode::kTc;
    else if (mode == "dtc") r.mode = unmask::PlanMode::kDtc;
    else if (mode == "austin") r.mode = unmask::PlanMode::kAustin;
    else unmask::fail(ErrorCode::kInvalidArgument, "unknown plan mode '" + mode + "'");
    r.k = o.value("k", 0);
    r.hat = o.value("hat", 0.0);
    r.eps = o.value("eps", 0.0);
    r.n = o.value("n", 0);
    if (c && r.n != 0 && r.n != c->z.n())
      unmask::fail(ErrorCode::kDimensionMismatch, "n differs from the curve length");
    const auto report = unmask::plan_report(r, c ? &c->z : nullptr);
    *out = copy_string(render("plan", report, format));
  });
}

unmask_status unmask_report_simulate(const unmask_dist* d, const char* options,
                                     unmask_format format, char** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const json o = parse_options(options);
    unmask::SimulateOptions s;
    const std::string method = o.value("method", "auto");
    if (method == "auto") s.method = unmask::KlMethod::kAuto;
    else if (method == "exact") s.method = unmask::KlMethod::kExact;
    else if (method == "mc") s.method = unmask::KlMethod::kMonteCarlo;
    else unmask::fail(ErrorCode::kInvalidArgument, "method must be auto, exact or mc");
    s.trials = o.value("trials", s.trials);
    s.seed = o.value("seed", s.seed);
    s.draws = o.value("draws", s.draws);
    s.eta = o.value("eta", s.eta);
    const auto sched = unmask::schedule_from_json(o);
    const auto report = unmask::simulate_report(d->pmf, sched, s);
    *out = copy_string(render("simulate", report, format));
  });
}

unmask_status unmask_report_sample(const unmask_dist* d, const char* options,
                                   unmask_format format, char** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const json o = parse_options(options);
    const auto sched = unmask::schedule_from_json(o);
    const auto oracle = unmask::OracleModel::smoothed(o.value("eta", 0.0));
    const auto count = o.value("count", std::uint64_t{1});
    const auto seed = o.value("seed", std::uint64_t{0});
    std::string csv;
    json samples = json::array();
    for (std::uint64_t i = 0; i < count; ++i) {
      const auto x = unmask::sample_random(d->pmf, sched, oracle, unmask::derive_seed(seed, i));
      for (std::size_t j = 0; j < x.size(); ++j) csv += (j ? "," : "") + std::to_string(x[j]);
      csv += "\n";
      samples.push_back(x);
    }
    *out = copy_string(format == UNMASK_FORMAT_CSV ? csv
                                                   : json{{"samples", samples}}.dump() + "\n");
  });
}

unmask_status unmask_report_verify(const unmask_dist* d, const char* options,
                                   unmask_format format, char** out, int* passed) {
  if (!d || !out || !passed) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const auto report = unmask::verify_report(d->pmf, curve_options(parse_options(options)));
    *passed = report.at("passed").get<bool>() ? 1 : 0;
    *out = copy_string(render("verify", report, format));
  });
}

unmask_status unmask_report_sweep(const unmask_dist* d, const char* options,
                                  unmask_format format, char** out) {
  if (!d || !out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const json o = parse_options(options);
    const std::string grid = o.value("grid", "value");
    if (grid != "value" && grid != "exponent")
      unmask::fail(ErrorCode::kInvalidArgument, "grid must be value or exponent");
    const auto report = unmask::sweep_report(
        d->pmf, o.value("eps", 0.0),
        grid == "value" ? unmask::GridBound::kValue : unmask::GridBound::kExponent);
    *out = copy_string(render("sweep", report, format));
  });
}

unmask_status unmask_report_hardcurve(const char* options, unmask_format format, char** out) {
  if (!out) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded([&] {
    const json o = parse_options(options);
    const auto grid = o.value("n_grid", std::vector<int>{});
    const auto report = unmask::hardcurve_report(grid, o.value("eps", 0.0), o.value("c", 0.05));
    *out = copy_string(render("hardcurve", report, format));
  });
}

unmask_status unmask_schedule_from_json(const char* text, int* steps, size_t cap, size_t* len) {
  if (!text || !len) return set_error(UNMASK_ERR_NULL_ARGUMENT, "null argument");
  return guarded_buffer(
      [&] { write_steps(unmask::schedule_from_text(text), steps, cap, len); });
}

}  // extern "C"
