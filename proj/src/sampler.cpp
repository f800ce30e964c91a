#include "unmask/sampler.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <string>
#include <unordered_map>

#include "unmask/combinatorics.hpp"
#include "unmask/error.hpp"

namespace unmask {

void SubsetSchedule::validate(int n) const {
  if (blocks.empty()) fail(ErrorCode::kInvalidArgument, "subset schedule has no blocks");
  std::uint32_t covered = 0;
  for (std::uint32_t b : blocks) {
    if (b == 0) fail(ErrorCode::kInvalidArgument, "empty block");
    if (covered & b) fail(ErrorCode::kInvalidArgument, "blocks overlap");
    covered |= b;
  }
  const std::uint32_t all = n >= 32 ? ~0u : (1u << n) - 1;
  if (covered != all) fail(ErrorCode::kInvalidArgument, "blocks do not partition the positions");
}

SubsetSchedule SubsetSchedule::from_positions(const std::vector<std::vector<int>>& blocks) {
  SubsetSchedule ss;
  for (const auto& block : blocks) {
    std::uint32_t mask = 0;
    for (int pos : block) {
      if (pos < 0 || pos >= 32) fail(ErrorCode::kPositionOutOfRange, std::to_string(pos));
      mask |= 1u << pos;
    }
    ss.blocks.push_back(mask);
  }
  return ss;
}

std::vector<int> SubsetSchedule::sizes() const {
  std::vector<int> out;
  for (std::uint32_t b : blocks) out.push_back(std::popcount(b));
  return out;
}

OracleModel OracleModel::smoothed(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) fail(ErrorCode::kInvalidArgument, "eta must lie in [0, 1]");
  return OracleModel{eta};
}

SubsetSchedule random_partition(const Schedule& s, Rng& rng) {
  std::vector<int> order(s.n());
  for (int i = 0; i < s.n(); ++i) order[i] = i;
  rng.shuffle(order);
  SubsetSchedule ss;
  std::size_t next = 0;
  for (int step : s.steps()) {
    std::uint32_t mask = 0;
    for (int t = 0; t < step; ++t) mask |= 1u << order[next++];
    ss.blocks.push_back(mask);
  }
  return ss;
}

std::vector<int> sample_fixed(const JointPMF& p, const SubsetSchedule& ss,
                              const OracleModel& oracle, std::uint64_t seed) {
  ss.validate(p.n());
  Rng rng(seed);
  const int q = p.q();
  std::vector<int> x(p.n(), -1);
  PartialAssignment revealed;
  for (std::uint32_t block : ss.blocks) {
    const MarginalTable table = conditional_oracle(p, revealed);
    std::vector<std::pair<int, int>> drawn;
    for (int pos = 0; pos < p.n(); ++pos) {
      if (!(block & (1u << pos))) continue;
      std::vector<double> row = table.rows.at(pos);
      for (double& v : row) v = (1.0 - oracle.eta) * v + oracle.eta / q;
      x[pos] = static_cast<int>(rng.categorical(row));
      drawn.emplace_back(pos, x[pos]);
    }
    revealed.pairs.insert(revealed.pairs.end(), drawn.begin(), drawn.end());
  }
  return x;
}

std::vector<int> sample_random(const JointPMF& p, const Schedule& s,
                               const OracleModel& oracle, std::uint64_t seed) {
  if (s.n() != p.n()) fail(ErrorCode::kDimensionMismatch, "schedule length differs from n");
  Rng rng(seed, 0);
  const SubsetSchedule ss = random_partition(s, rng);
  return sample_fixed(p, ss, oracle, derive_seed(seed, 1));
}

namespace {

// Lazily computed marginals of p keyed by position mask.
class MarginalCache {
 public:
  explicit MarginalCache(const JointPMF& p) : p_(p) {}

  const std::vector<double>& get(std::uint32_t mask) {
    auto it = tables_.find(mask);
    if (it == tables_.end()) it = tables_.emplace(mask, marginal_by_mask(p_, mask)).first;
    return it->second;
  }

 private:
  const JointPMF& p_;
  std::unordered_map<std::uint32_t, std::vector<double>> tables_;
};

// Probability that the fixed sampler assigns to x_j given x_T: the oracle row
// entry, uniform when x_T has zero mass.
double row_entry(MarginalCache& cache, const std::vector<int>& digits, std::uint32_t before,
                 int pos, int q, double eta) {
  const double den = cache.get(before)[sub_index(digits, before, q)];
  double v = 1.0 / q;
  if (den > 0.0) {
    const std::uint32_t with = before | (1u << pos);
    v = cache.get(with)[sub_index(digits, with, q)] / den;
  }
  return (1.0 - eta) * v + eta / q;
}

void advance(std::vector<int>& digits, int q) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < q) return;
    digits[i] = 0;
  }
}

std::vector<double> output_table(const JointPMF& p, const SubsetSchedule& ss, double eta,
                                 MarginalCache& cache) {
  const int n = p.n();
  const int q = p.q();
  std::vector<double> nu(p.size(), 0.0);
  std::vector<int> digits(n, 0);
  for (std::size_t idx = 0; idx < p.size(); ++idx, advance(digits, q)) {
    double prob = 1.0;
    std::uint32_t before = 0;
    for (std::uint32_t block : ss.blocks) {
      for (int pos = 0; pos < n && prob > 0.0; ++pos)
        if (block & (1u << pos)) prob *= row_entry(cache, digits, before, pos, q, eta);
      before |= block;
    }
    nu[idx] = prob;
  }
  return nu;
}

// Renormalizes away floating drift so the result passes the simplex check.
JointPMF as_pmf(int q, int n, std::vector<double> table) {
  double total = 0.0;
  for (double v : table) total += v;
  for (double& v : table) v /= total;
  return JointPMF(q, n, std::move(table));
}

void check_partition_count(const Schedule& s) {
  if (multinomial(s.steps()) > kMaxPartitions)
    fail(ErrorCode::kInfeasibleEnumeration,
         "more than 10^6 ordered partitions; use the Monte-Carlo estimate");
}

}  // namespace

JointPMF output_dist_fixed(const JointPMF& p, const SubsetSchedule& ss,
                           const OracleModel& oracle) {
  ss.validate(p.n());
  MarginalCache cache(p);
  return as_pmf(p.q(), p.n(), output_table(p, ss, oracle.eta, cache));
}

double expected_kl_exact(const JointPMF& p, const Schedule& s) {
  if (s.n() != p.n()) fail(ErrorCode::kDimensionMismatch, "schedule length differs from n");
  check_partition_count(s);
  MarginalCache cache(p);
  double sum = 0.0;
  std::uint64_t count = 0;
  for_each_ordered_partition(s.steps(), [&](const std::vector<std::uint32_t>& blocks) {
    const SubsetSchedule ss{blocks};
    sum += kl_bits(p.probs(), output_table(p, ss, 0.0, cache));
    ++count;
  });
  return sum / static_cast<double>(count);
}

Estimate expected_kl_mc(const JointPMF& p, const Schedule& s, std::uint64_t trials,
                        std::uint64_t seed, bool dedup) {
  if (s.n() != p.n()) fail(ErrorCode::kDimensionMismatch, "schedule length differs from n");
  if (trials < 1) fail(ErrorCode::kInvalidArgument, "trials must be >= 1");
  MarginalCache cache(p);
  const std::uint64_t population = multinomial(s.steps());
  std::vector<double> values;

  if (dedup && trials >= population) {
    for_each_ordered_partition(s.steps(), [&](const std::vector<std::uint32_t>& blocks) {
      values.push_back(kl_bits(p.probs(), output_table(p, SubsetSchedule{blocks}, 0.0, cache)));
    });
  } else {
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t t = 0; values.size() < trials; ++t) {
      Rng rng(seed, t);
      const SubsetSchedule ss = random_partition(s, rng);
      if (dedup && !seen.insert(ss.blocks).second) continue;
      values.push_back(kl_bits(p.probs(), output_table(p, ss, 0.0, cache)));
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
  return {mean, se};
}

JointPMF mixture_output_dist(const JointPMF& p, const Schedule& s) {
  if (s.n() != p.n()) fail(ErrorCode::kDimensionMismatch, "schedule length differs from n");
  check_partition_count(s);
  MarginalCache cache(p);
  std::vector<double> mix(p.size(), 0.0);
  std::uint64_t count = 0;
  for_each_ordered_partition(s.steps(), [&](const std::vector<std::uint32_t>& blocks) {
    const auto nu = output_table(p, SubsetSchedule{blocks}, 0.0, cache);
    for (std::size_t i = 0; i < mix.size(); ++i) mix[i] += nu[i];
    ++count;
  });
  for (double& v : mix) v /= static_cast<double>(count);
  return as_pmf(p.q(), p.n(), std::move(mix));
}

DecouplingResult decoupling_check(const JointPMF& p, const SubsetSchedule& ss, double eta) {
  const OracleModel learned = OracleModel::smoothed(eta);
  ss.validate(p.n());
  DecouplingResult r;
  r.kl_exact = kl_bits(p, output_dist_fixed(p, ss, OracleModel::exact()));
  r.kl_learned = kl_bits(p, output_dist_fixed(p, ss, learned));
  r.lhs = r.kl_learned - r.kl_exact;

  // E_{x ~ p} sum_i sum_{j in S_i} log2 CO(x_j | x_{T_i}) / CO_hat(x_j | x_{T_i}).
  MarginalCache cache(p);
  const int n = p.n();
  const int q = p.q();
  std::vector<int> digits(n, 0);
  double rhs = 0.0;
  for (std::size_t idx = 0; idx < p.size(); ++idx, advance(digits, q)) {
    if (p[idx] == 0.0) continue;
    std::uint32_t before = 0;
    double log_ratio = 0.0;
    for (std::uint32_t block : ss.blocks) {
      for (int pos = 0; pos < n; ++pos) {
        if (!(block & (1u << pos))) continue;
        const double exact = row_entry(cache, digits, before, pos, q, 0.0);
        const double approx = row_entry(cache, digits, before, pos, q, learned.eta);
        log_ratio += std::log2(exact / approx);
      }
      before |= block;
    }
    rhs += p[idx] * log_ratio;
  }
  r.rhs = rhs;
  r.gap = std::abs(r.lhs - r.rhs);
  r.swapped_gap = std::abs((r.kl_exact - r.kl_learned) - r.rhs);
  return r;
}

}  // namespace unmask
