#include "unmask/info_curve.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "unmask/combinatorics.hpp"
#include "unmask/error.hpp"
#include "unmask/rng.hpp"

namespace unmask {

namespace {

// Sums position `pos` out of a table over `mask` (positions in increasing
// order, first position most significant).
std::vector<double> sum_out(const std::vector<double>& table, std::uint32_t mask,
                            int pos, int q) {
  const int width = std::popcount(mask);
  const int rank = std::popcount(mask & ((1u << pos) - 1));  // positions before pos
  std::size_t stride = 1;
  for (int i = 0; i < width - 1 - rank; ++i) stride *= q;
  std::vector<double> out(table.size() / q, 0.0);
  for (std::size_t idx = 0; idx < table.size(); ++idx) {
    const std::size_t hi = idx / (stride * q);
    const std::size_t lo = idx % stride;
    out[hi * stride + lo] += table[idx];
  }
  return out;
}

// Visits every subset of the full position set exactly once by removing
// positions in increasing order; each marginal is derived from its parent so
// the live tables never exceed one per depth.
void visit_subsets(const std::vector<double>& table, std::uint32_t mask, int next,
                   int n, int q, std::vector<double>& level_sum) {
  level_sum[std::popcount(mask)] += entropy_bits(table);
  for (int pos = next; pos < n; ++pos) {
    if (!(mask & (1u << pos))) continue;
    visit_subsets(sum_out(table, mask, pos, q), mask & ~(1u << pos), pos + 1, n, q,
                  level_sum);
  }
}

}  // namespace

EntropyCurve entropy_curve_exact(const JointPMF& p) {
  const int n = p.n();
  if (n > kMaxExactCurveLength)
    fail(ErrorCode::kInfeasibleEnumeration,
         "exact curve enumerates 2^n subsets; n = " + std::to_string(n) + " > 20");
  std::vector<double> level_sum(n + 1, 0.0);
  std::vector<double> full(p.probs().begin(), p.probs().end());
  visit_subsets(full, (1u << n) - 1, 0, n, p.q(), level_sum);

  EntropyCurve curve;
  curve.method = CurveMethod::kExact;
  curve.h.resize(n + 1);
  curve.h[0] = 0.0;
  for (int i = 1; i <= n; ++i)
    curve.h[i] = level_sum[i] / static_cast<double>(binomial(n, i));
  return curve;
}

EntropyCurve entropy_curve_mc(const JointPMF& p, std::size_t samples_per_level,
                              std::uint64_t seed, bool dedup) {
  if (samples_per_level < 1)
    fail(ErrorCode::kInvalidArgument, "samples_per_level must be >= 1");
  const int n = p.n();
  if (n > 31) fail(ErrorCode::kInfeasibleEnumeration, "n too large for subset masks");

  EntropyCurve curve;
  curve.method = CurveMethod::kMonteCarlo;
  curve.h.assign(n + 1, 0.0);
  curve.std_error.assign(n + 1, 0.0);

  for (int level = 1; level <= n; ++level) {
    Rng rng(seed, static_cast<std::uint64_t>(level));
    std::map<std::uint32_t, double> memo;
    auto entropy_of = [&](std::uint32_t mask) {
      auto it = memo.find(mask);
      if (it != memo.end()) return it->second;
      const double h = entropy_bits(marginal_by_mask(p, mask));
      memo.emplace(mask, h);
      return h;
    };

    const std::uint64_t population = binomial(n, level);
    std::vector<double> values;
    if (dedup && samples_per_level >= population) {
      for_each_subset(n, level, [&](std::uint32_t m) { values.push_back(entropy_of(m)); });
    } else {
      std::set<std::uint32_t> drawn;
      std::vector<int> positions(n);
      while (values.size() < samples_per_level) {
        for (int i = 0; i < n; ++i) positions[i] = i;
        std::uint32_t mask = 0;
        for (int i = 0; i < level; ++i) {
          const std::size_t j = i + rng.below(static_cast<std::uint64_t>(n - i));
          std::swap(positions[i], positions[j]);
          mask |= 1u << positions[i];
        }
        if (dedup && !drawn.insert(mask).second) continue;
        values.push_back(entropy_of(mask));
      }
    }

    const double m = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double se = values.size() > 1 ? std::sqrt(ss / (m - 1.0) / m) : 0.0;
    if (dedup) {
      const double pop = static_cast<double>(population);
      se = m >= pop ? 0.0 : se * std::sqrt((pop - m) / (pop - 1.0));
    }
    curve.h[level] = mean;
    curve.std_error[level] = se;
  }
  return curve;
}

InfoCurve info_curve_from_entropy(const EntropyCurve& h, HanCheck check) {
  const int n = h.n();
  if (n < 1) fail(ErrorCode::kInvalidArgument, "entropy curve needs H_0..H_n with n >= 1");
  if (h.h[0] != 0.0) fail(ErrorCode::kInvalidArgument, "H_0 must be 0");

  InfoCurve z;
  z.z.resize(n);
  for (int i = 1; i <= n; ++i) {
    double v = h.h[1] + h.h[i - 1] - h.h[i];
    if (v < 0.0 && v >= -kZClampTolerance) v = 0.0;
    if (check == HanCheck::kLenient && v < 0.0) v = 0.0;
    z.z[i - 1] = v;
  }
  if (!h.std_error.empty()) {
    z.z_stderr.resize(n);
    for (int i = 1; i <= n; ++i) {
      // Levels use independent streams, so variances add per coefficient.
      std::vector<double> coeff(n + 1, 0.0);
      coeff[1] += 1.0;
      coeff[i - 1] += 1.0;
      coeff[i] -= 1.0;
      double var = 0.0;
      for (int l = 1; l <= n; ++l) var += coeff[l] * coeff[l] * h.std_error[l] * h.std_error[l];
      z.z_stderr[i - 1] = std::sqrt(var);
    }
  }
  if (check == HanCheck::kStrict) {
    if (int j = find_han_violation(z); j != 0)
      fail(ErrorCode::kHanViolation,
           "information curve decreases or goes negative at j = " + std::to_string(j));
  }
  return z;
}

int find_han_violation(const InfoCurve& z, double tol) {
  for (int j = 1; j <= z.n(); ++j) {
    if (z[j] < -tol) return j;
    if (j > 1 && z[j] < z[j - 1] - tol) return j;
  }
  return 0;
}

CorrelationSummary tc_dtc_from_curve(const InfoCurve& z) {
  CorrelationSummary s;
  for (double v : z.z) s.tc += v;
  s.z_n = z.z.empty() ? 0.0 : z.z.back();
  s.dtc = z.n() * s.z_n - s.tc;
  return s;
}

double tc_direct(const JointPMF& p) {
  double sum = 0.0;
  for (int i = 0; i < p.n(); ++i) sum += entropy_bits(marginal_by_mask(p, 1u << i));
  return sum - entropy_bits(p);
}

double dtc_direct(const JointPMF& p) {
  const int n = p.n();
  const double joint = entropy_bits(p);
  const std::uint32_t all = (1u << n) - 1;
  double conditional = 0.0;
  for (int i = 0; i < n; ++i)
    conditional += joint - entropy_bits(marginal_by_mask(p, all & ~(1u << i)));
  return joint - conditional;
}

}  // namespace unmask
