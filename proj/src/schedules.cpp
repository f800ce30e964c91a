#include "unmask/schedules.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "unmask/error.hpp"

namespace unmask {

Schedule::Schedule(std::vector<int> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) fail(ErrorCode::kInvalidArgument, "schedule has no steps");
  for (int s : steps_)
    if (s < 1) fail(ErrorCode::kInvalidArgument, "schedule steps must be >= 1");
  n_ = std::accumulate(steps_.begin(), steps_.end(), 0);
}

Schedule Schedule::all_singles(int n) { return Schedule(std::vector<int>(n, 1)); }

Schedule Schedule::one_shot(int n) { return Schedule(std::vector<int>{n}); }

int Schedule::max_step() const noexcept {
  return *std::max_element(steps_.begin(), steps_.end());
}

const char* source_name(ScheduleSource source) noexcept {
  switch (source) {
    case ScheduleSource::kDp: return "dp";
    case ScheduleSource::kTc: return "tc";
    case ScheduleSource::kDtc: return "dtc";
    case ScheduleSource::kAustin: return "austin";
    case ScheduleSource::kSingles: return "singles";
    case ScheduleSource::kOneShot: return "one_shot";
    case ScheduleSource::kCustom: return "custom";
  }
  return "custom";
}

ScheduleSource parse_source(const std::string& name) {
  for (auto s : {ScheduleSource::kDp, ScheduleSource::kTc, ScheduleSource::kDtc,
                 ScheduleSource::kAustin, ScheduleSource::kSingles,
                 ScheduleSource::kOneShot, ScheduleSource::kCustom})
    if (name == source_name(s)) return s;
  fail(ErrorCode::kParse, "unknown schedule source '" + name + "'");
}

NodeVector schedule_to_nodes(const Schedule& s) {
  NodeVector out;
  int node = 1;
  for (int step : s.steps()) {
    out.nodes.push_back(node);
    node += step;
  }
  return out;
}

Schedule nodes_to_schedule(const NodeVector& nodes, int n) {
  const auto& N = nodes.nodes;
  if (N.empty() || N.front() != 1)
    fail(ErrorCode::kNonMonotoneNodes, "node vector must start at 1");
  for (std::size_t a = 1; a < N.size(); ++a)
    if (N[a] <= N[a - 1]) fail(ErrorCode::kNonMonotoneNodes, "nodes must increase strictly");
  if (N.back() > n) fail(ErrorCode::kNonMonotoneNodes, "last node exceeds n");
  std::vector<int> steps;
  for (std::size_t a = 0; a < N.size(); ++a)
    steps.push_back((a + 1 < N.size() ? N[a + 1] : n + 1) - N[a]);
  return Schedule(std::move(steps));
}

double riemann_error(const InfoCurve& z, const Schedule& s) {
  if (z.n() != s.n())
    fail(ErrorCode::kDimensionMismatch, "schedule length differs from curve length");
  double err = 0.0;
  int start = 1;  // N_{i-1} + 1
  for (int step : s.steps()) {
    const double base = z[start];
    for (int j = 0; j < step; ++j) err += std::abs(z[start + j] - base);
    start += step;
  }
  return err;
}

std::vector<double> left_riemann_seq(const InfoCurve& z, const NodeVector& nodes) {
  const int n = z.n();
  nodes_to_schedule(nodes, n);  // validates
  std::vector<double> out(n);
  std::size_t a = 0;
  for (int j = 1; j <= n; ++j) {
    while (a + 1 < nodes.nodes.size() && j >= nodes.nodes[a + 1]) ++a;
    out[j - 1] = z[nodes.nodes[a]];
  }
  return out;
}

OptimalNodes optimal_nodes_dp(const InfoCurve& z, int k) {
  const int n = z.n();
  if (k < 1 || k > n) fail(ErrorCode::kInvalidArgument, "need 1 <= k <= n");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // best[m][a]: least error covering [a, n] with m segments, the first at a.
  std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 2, kInf));
  for (int a = 1; a <= n; ++a) {
    double cost = 0.0;
    for (int j = a; j <= n; ++j) cost += std::abs(z[j] - z[a]);
    best[1][a] = cost;
  }
  for (int m = 2; m <= k; ++m) {
    for (int a = 1; a + m - 1 <= n; ++a) {
      double cost = 0.0;  // error of the segment [a, b)
      double value = kInf;
      for (int b = a + 1; b <= n - m + 2; ++b) {
        cost += std::abs(z[b - 1] - z[a]);
        value = std::min(value, cost + best[m - 1][b]);
      }
      best[m][a] = value;
    }
  }

  OptimalNodes out;
  out.error = best[k][1];
  int a = 1;
  out.nodes.nodes.push_back(1);
  for (int m = k; m >= 2; --m) {
    const double target = best[m][a];
    const double slack = 1e-12 * (1.0 + std::abs(target));
    double cost = 0.0;
    int chosen = -1;
    for (int b = a + 1; b <= n - m + 2; ++b) {
      cost += std::abs(z[b - 1] - z[a]);
      if (cost + best[m - 1][b] <= target + slack) {
        chosen = b;
        break;
      }
    }
    out.nodes.nodes.push_back(chosen);
    a = chosen;
  }
  return out;
}

namespace {

void check_tolerance(double eps, double hat) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    fail(ErrorCode::kInvalidTolerance, "eps must be a positive finite number");
  if (!(hat >= 0.0)) fail(ErrorCode::kInvalidArgument, "correlation estimate must be >= 0");
}

// Returns zeta = 1 + ceil(hat / eps), or 0 when zeta >= n + 1 (perfect regime).
long long zeta_for(double hat, double eps, int n) {
  const double ratio = std::ceil(hat / eps);
  if (ratio >= static_cast<double>(n)) return 0;
  return 1 + static_cast<long long>(ratio);
}

// lambda = floor(log(n - zeta + 1) / log(zeta / (zeta - 1))) + 2.
long long lambda_for(long long zeta, int n) {
  const long long base = n - zeta + 1;
  long long m;
  if (zeta == 2) {
    m = std::bit_width(static_cast<unsigned long long>(base)) - 1;  // exact log2
  } else {
    m = static_cast<long long>(std::floor(std::log(static_cast<long double>(base)) /
                                          std::log(static_cast<long double>(zeta) /
                                                   static_cast<long double>(zeta - 1))));
  }
  return m + 2;
}

Schedule drop_zero_steps(const std::vector<long long>& raw) {
  std::vector<int> steps;
  for (long long s : raw)
    if (s > 0) steps.push_back(static_cast<int>(s));
  return Schedule(std::move(steps));
}

}  // namespace

Schedule tc_schedule(double tc_hat, double eps, int n) {
  check_tolerance(eps, tc_hat);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be >= 1");
  const long long zeta = zeta_for(tc_hat, eps, n);
  if (zeta == 0) return Schedule::all_singles(n);
  if (zeta == 1) return Schedule::one_shot(n);  // hat = 0
  const long long lambda = lambda_for(zeta, n);

  std::vector<long long> revealed{0};
  for (long long i = 1; i <= lambda; ++i) {
    const long long prev = revealed.back();
    revealed.push_back(prev + (n - prev) / zeta);
  }
  while (revealed.back() < n) revealed.push_back(revealed.back() + 1);

  std::vector<long long> raw;
  for (std::size_t i = 1; i < revealed.size(); ++i) raw.push_back(revealed[i] - revealed[i - 1]);
  return drop_zero_steps(raw);
}

Schedule dtc_schedule(double dtc_hat, double eps, int n) {
  check_tolerance(eps, dtc_hat);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be >= 1");
  const long long zeta = zeta_for(dtc_hat, eps, n);
  if (zeta == 0) return Schedule::all_singles(n);
  if (zeta == 1) return Schedule::one_shot(n);  // hat = 0
  const long long lambda = lambda_for(zeta, n);

  // masked[i] = number of still-masked positions, counted from the end.
  std::vector<long long> masked{n};
  for (long long i = 1; i <= lambda; ++i) {
    const long long prev = masked.back();
    masked.push_back((prev * (zeta - 1) + zeta - 1) / zeta);
  }
  while (masked.back() > 0) masked.push_back(masked.back() - 1);

  const std::size_t last = masked.size() - 1;
  std::vector<long long> raw;
  for (std::size_t i = 1; i <= last; ++i) raw.push_back(masked[last - i] - masked[last - i + 1]);
  return drop_zero_steps(raw);
}

Schedule austin_schedule(double dtc_hat, double eps, int n) {
  check_tolerance(eps, dtc_hat);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "n must be >= 1");
  if (dtc_hat == 0.0) return Schedule::one_shot(n);

  const double delta_sq = std::sqrt(dtc_hat * eps / n);
  const double units_real = std::floor(dtc_hat / delta_sq);
  if (units_real >= n - 1) return Schedule::all_singles(n);
  const int units = static_cast<int>(units_real);
  const int remaining = n - units;
  const double blocks_real = std::ceil(delta_sq * n / eps);
  const int blocks =
      blocks_real >= remaining ? remaining : std::max(1, static_cast<int>(blocks_real));

  std::vector<int> steps(units, 1);
  const int base = remaining / blocks;
  const int extra = remaining % blocks;
  for (int b = 0; b < blocks; ++b) steps.push_back(base + (b >= blocks - extra ? 1 : 0));
  return Schedule(std::move(steps));
}

double tc_dtc_round_bound(double hat, double eps, int n) {
  return 2.0 + (1.0 + std::log(static_cast<double>(n))) * (1.0 + std::ceil(hat / eps));
}

double austin_round_bound(double dtc_hat, double eps, int n) {
  const double x = std::sqrt(dtc_hat * n / eps);
  return kAustinRoundConstant * std::max(1.0, x);
}

double licai_bound(const CorrelationSummary& summary, int s_max, int n) {
  if (s_max < 1 || s_max > n) fail(ErrorCode::kInvalidArgument, "need 1 <= s_max <= n");
  const unsigned width = std::bit_width(static_cast<unsigned>(s_max - 1));  // ceil(log2 s_max)
  const double factor = static_cast<double>((1ull << width) - 1);
  return factor / n * (summary.tc + summary.dtc);
}

std::vector<double> sweep_values(int n, int q, double eps, GridBound bound) {
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidTolerance, "eps must be positive");
  const double ceiling = n * std::log2(static_cast<double>(q));
  int lo;
  int hi;
  if (bound == GridBound::kValue) {
    lo = static_cast<int>(std::ceil(std::log2(eps)));
    while (std::ldexp(1.0, lo) < eps) ++lo;
    while (std::ldexp(1.0, lo - 1) >= eps) --lo;
    hi = static_cast<int>(std::ceil(std::log2(ceiling)));
    while (std::ldexp(1.0, hi) < ceiling) ++hi;
  } else {
    lo = static_cast<int>(std::ceil(eps));
    hi = static_cast<int>(std::floor(ceiling));
  }
  std::vector<double> out;
  for (int i = lo; i <= hi; ++i) out.push_back(std::ldexp(1.0, i));
  if (out.empty()) out.push_back(std::ldexp(1.0, lo));
  return out;
}

std::vector<std::pair<double, double>> sweep_grid(int n, int q, double eps, GridBound bound) {
  const auto values = sweep_values(n, q, eps, bound);
  std::vector<std::pair<double, double>> out;
  for (double tc : values)
    for (double dtc : values) out.emplace_back(tc, dtc);
  return out;
}

}  // namespace unmask
