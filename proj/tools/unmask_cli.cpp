// Command-line front end. Every computation goes through the C interface in
// unmask.h; this file only parses flags, reads files and writes results.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or spec error,
// 3 feasibility guard (enumeration too large).

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "unmask/unmask.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;

#ifndef UNMASK_SPECS_DIR
#define UNMASK_SPECS_DIR ""
#endif

// Raised for any failure that should end the run with a given exit code.
struct Exit {
  int code;
  std::string message;
};

[[noreturn]] void usage(const std::string& message) { throw Exit{kExitUsage, message}; }

void check(unmask_status status) {
  if (status == UNMASK_OK) return;
  const int code = status == UNMASK_ERR_INFEASIBLE_ENUMERATION ? kExitInfeasible : kExitUsage;
  throw Exit{code, unmask_last_error()};
}

struct DistDeleter {
  void operator()(unmask_dist* d) const { unmask_dist_free(d); }
};
struct CurveDeleter {
  void operator()(unmask_curve* c) const { unmask_curve_free(c); }
};
using DistPtr = std::unique_ptr<unmask_dist, DistDeleter>;
using CurvePtr = std::unique_ptr<unmask_curve, CurveDeleter>;

std::string read_file(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path resolved(path);
  // Bare names fall back to the bundled spec directory.
  if (!fs::exists(resolved) && resolved.is_relative() && *UNMASK_SPECS_DIR)
    if (fs::exists(fs::path(UNMASK_SPECS_DIR) / resolved))
      resolved = fs::path(UNMASK_SPECS_DIR) / resolved;
  std::ifstream in(resolved, std::ios::binary);
  if (!in) usage("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Takes ownership of a C string produced by the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  unmask_string_free(s);
  return out;
}

DistPtr load_dist(const std::string& path) {
  unmask_dist* d = nullptr;
  check(unmask_dist_from_json(read_file(path).c_str(), &d));
  return DistPtr(d);
}

struct Globals {
  std::uint64_t seed = 0;
  std::string format = "json";
  std::string out;

  unmask_format c_format() const {
    return format == "csv" ? UNMASK_FORMAT_CSV : UNMASK_FORMAT_JSON;
  }
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) usage("cannot write '" + g.out + "'");
  f << text;
}

struct CurveFlags {
  std::string dist;
  std::string method = "exact";
  std::uint64_t samples = 0;
  bool dedup = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--dist", dist, "distribution spec JSON")->required();
    cmd->add_option("--method", method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
    cmd->add_option("--samples", samples, "subsets per level for --method mc");
    cmd->add_flag("--dedup", dedup, "sample subsets without replacement");
  }

  std::string options(const Globals& g) const {
    if (method == "mc" && samples == 0) usage("--method mc requires --samples M");
    return json{{"method", method}, {"samples", samples}, {"seed", g.seed}, {"dedup", dedup}}
        .dump();
  }
};

struct ScheduleFlags {
  std::string schedule;
  std::string steps;

  void attach(CLI::App* cmd) {
    auto* file = cmd->add_option("--schedule", schedule, "schedule or plan JSON file");
    auto* list = cmd->add_option("--steps", steps, "comma-separated step sizes, e.g. 4,2,1,1");
    file->excludes(list);
  }

  std::vector<int> load() const {
    if (schedule.empty() && steps.empty()) usage("give --schedule FILE or --steps LIST");
    std::string text;
    if (!schedule.empty()) {
      text = read_file(schedule);
    } else {
      text = "{\"steps\":[" + steps + "]}";
    }
    std::vector<int> out(64);
    std::size_t len = 0;
    unmask_status st = unmask_schedule_from_json(text.c_str(), out.data(), out.size(), &len);
    if (st == UNMASK_ERR_BUFFER_TOO_SMALL) {
      out.resize(len);
      st = unmask_schedule_from_json(text.c_str(), out.data(), out.size(), &len);
    }
    check(st);
    out.resize(len);
    return out;
  }
};

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      usage("bad integer '" + cell + "' in list");
    }
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Parallel unmasking schedules: information curves, planning and verification"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "random seed (default 0)");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", g.out, "output path (default stdout)");

  auto* curve = app.add_subcommand("curve", "information curve of a distribution");
  CurveFlags curve_flags;
  curve_flags.attach(curve);

  auto* summary = app.add_subcommand("summary", "total and dual total correlation");
  CurveFlags summary_flags;
  summary_flags.attach(summary);

  auto* plan = app.add_subcommand("plan", "plan an unmasking schedule");
  std::string plan_curve;
  std::optional<int> plan_k;
  std::optional<double> tc_hat;
  std::optional<double> dtc_hat;
  std::optional<double> plan_eps;
  std::optional<int> plan_n;
  bool austin = false;
  plan->add_option("--curve", plan_curve, "curve CSV or JSON file");
  plan->add_option("--k", plan_k, "number of rounds for the optimal plan");
  plan->add_option("--tc-hat", tc_hat, "upper estimate of total correlation (bits)");
  plan->add_option("--dtc-hat", dtc_hat, "upper estimate of dual total correlation (bits)");
  plan->add_flag("--austin", austin, "use the square-root schedule (with --dtc-hat)");
  plan->add_option("--eps", plan_eps, "target KL error (bits)");
  plan->add_option("--n", plan_n, "sequence length");

  auto* simulate = app.add_subcommand("simulate", "expected KL of a schedule");
  CurveFlags sim_dist;
  ScheduleFlags sim_sched;
  std::string sim_method = "auto";
  std::uint64_t sim_trials = 1000;
  std::uint64_t sim_draws = 0;
  double sim_eta = 0.0;
  simulate->add_option("--dist", sim_dist.dist, "distribution spec JSON")->required();
  sim_sched.attach(simulate);
  simulate->add_option("--method", sim_method, "auto, exact or mc")
      ->check(CLI::IsMember({"auto", "exact", "mc"}));
  simulate->add_option("--trials", sim_trials, "partitions for the Monte-Carlo estimate");
  simulate->add_option("--samples", sim_draws, "also emit this many sampled sequences");
  simulate->add_option("--eta", sim_eta, "oracle smoothing for emitted samples");

  auto* sample = app.add_subcommand("sample", "draw sequences with the random sampler");
  std::string sample_dist;
  ScheduleFlags sample_sched;
  std::uint64_t sample_count = 1;
  double sample_eta = 0.0;
  sample->add_option("--dist", sample_dist, "distribution spec JSON")->required();
  sample_sched.attach(sample);
  sample->add_option("--count", sample_count, "number of sequences");
  sample->add_option("--eta", sample_eta, "mix each oracle row with uniform at this weight");

  auto* verify = app.add_subcommand("verify", "run the identity battery");
  CurveFlags verify_flags;
  verify_flags.attach(verify);

  auto* sweep = app.add_subcommand("sweep", "hyperparameter sweep over correlation estimates");
  std::string sweep_dist;
  double sweep_eps = 0.0;
  std::string sweep_grid = "value";
  sweep->add_option("--dist", sweep_dist, "distribution spec JSON")->required();
  sweep->add_option("--eps", sweep_eps, "target KL error (bits)")->required();
  sweep->add_option("--grid", sweep_grid, "value (2^i >= eps) or exponent (i >= eps)")
      ->check(CLI::IsMember({"value", "exponent"}));

  auto* hardcurve = app.add_subcommand("hardcurve", "lower-bound experiment on the hard curve");
  std::string n_grid;
  double hard_eps = 0.0;
  double hard_c = 0.05;
  hardcurve->add_option("--n-grid", n_grid, "comma-separated sequence lengths")->required();
  hardcurve->add_option("--eps", hard_eps, "tolerance (default 1/ln n per n)");
  hardcurve->add_option("--c", hard_c, "piece-count constant: k = floor(c ln n / eps)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const unmask_format fmt = g.c_format();
  char* text = nullptr;

  if (curve->parsed()) {
    auto d = load_dist(curve_flags.dist);
    check(unmask_report_curve(d.get(), curve_flags.options(g).c_str(), fmt, &text));
  } else if (summary->parsed()) {
    auto d = load_dist(summary_flags.dist);
    check(unmask_report_summary(d.get(), summary_flags.options(g).c_str(), fmt, &text));
  } else if (plan->parsed()) {
    const int modes = (plan_k ? 1 : 0) + (tc_hat ? 1 : 0) + (dtc_hat ? 1 : 0);
    if (modes != 1) usage("give exactly one of --k, --tc-hat, --dtc-hat");
    if (austin && !dtc_hat) usage("--austin needs --dtc-hat");
    json o;
    CurvePtr c;
    if (!plan_curve.empty()) {
      unmask_curve* raw = nullptr;
      check(unmask_curve_from_text(read_file(plan_curve).c_str(), &raw));
      c.reset(raw);
    }
    if (plan_k) {
      if (!c) usage("--k needs --curve");
      if (plan_eps || plan_n) usage("--k does not take --eps or --n");
      o = {{"mode", "optimal"}, {"k", *plan_k}};
    } else {
      if (!plan_eps) usage("--tc-hat/--dtc-hat need --eps");
      if (!plan_n && !c) usage("--tc-hat/--dtc-hat need --n or --curve");
      o = {{"mode", tc_hat ? "tc" : (austin ? "austin" : "dtc")},
           {"hat", tc_hat ? *tc_hat : *dtc_hat},
           {"eps", *plan_eps},
           {"n", plan_n.value_or(0)}};
    }
    check(unmask_report_plan(c.get(), o.dump().c_str(), fmt, &text));
  } else if (simulate->parsed()) {
    auto d = load_dist(sim_dist.dist);
    const json o{{"steps", sim_sched.load()}, {"method", sim_method}, {"trials", sim_trials},
                 {"seed", g.seed}, {"draws", sim_draws}, {"eta", sim_eta}};
    check(unmask_report_simulate(d.get(), o.dump().c_str(), fmt, &text));
  } else if (sample->parsed()) {
    auto d = load_dist(sample_dist);
    const json o{{"steps", sample_sched.load()}, {"count", sample_count}, {"eta", sample_eta},
                 {"seed", g.seed}};
    check(unmask_report_sample(d.get(), o.dump().c_str(), fmt, &text));
  } else if (verify->parsed()) {
    auto d = load_dist(verify_flags.dist);
    int passed = 0;
    check(unmask_report_verify(d.get(), verify_flags.options(g).c_str(), fmt, &text, &passed));
    emit(g, take(text));
    if (!passed) {
      std::cerr << "verification failed; see the checks marked passed=false\n";
      return kExitVerifyFailed;
    }
    return kExitOk;
  } else if (sweep->parsed()) {
    auto d = load_dist(sweep_dist);
    const json o{{"eps", sweep_eps}, {"grid", sweep_grid}};
    check(unmask_report_sweep(d.get(), o.dump().c_str(), fmt, &text));
  } else if (hardcurve->parsed()) {
    const auto grid = parse_int_list(n_grid);
    if (grid.empty()) usage("--n-grid is empty");
    const json o{{"n_grid", grid}, {"eps", hard_eps}, {"c", hard_c}};
    check(unmask_report_hardcurve(o.dump().c_str(), fmt, &text));
  }
  emit(g, take(text));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Exit& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
