#pragma once

// Fixed and random parallel unmasking, the exact law of their output, and the
// brute-force / Monte-Carlo expected-KL oracles.

#include <cstdint>
#include <vector>

#include "unmask/dist.hpp"
#include "unmask/rng.hpp"
#include "unmask/schedules.hpp"

namespace unmask {

inline constexpr std::uint64_t kMaxPartitions = 1'000'000;

/// Ordered blocks S_1..S_k partitioning {0..n-1}, each a position bitmask.
struct SubsetSchedule {
  std::vector<std::uint32_t> blocks;

  /// Throws InvalidArgument unless the blocks are nonempty, disjoint and cover n.
  void validate(int n) const;
  static SubsetSchedule from_positions(const std::vector<std::vector<int>>& blocks);
  std::vector<int> sizes() const;
};

/// Conditional-marginal oracle: exact, or each exact row mixed with uniform at
/// weight eta. eta = 0 is the exact oracle.
struct OracleModel {
  double eta = 0.0;

  static OracleModel exact() { return {}; }
  static OracleModel smoothed(double eta);
};

/// Uniformly random ordered partition with the schedule's block sizes.
SubsetSchedule random_partition(const Schedule& s, Rng& rng);

/// One draw of the fixed unmasking sampler: round by round, every position of
/// the block is drawn independently from its oracle row given earlier rounds.
std::vector<int> sample_fixed(const JointPMF& p, const SubsetSchedule& ss,
                              const OracleModel& oracle, std::uint64_t seed);

/// One draw of the random unmasking sampler.
std::vector<int> sample_random(const JointPMF& p, const Schedule& s,
                               const OracleModel& oracle, std::uint64_t seed);

/// Exact output law of the fixed sampler.
JointPMF output_dist_fixed(const JointPMF& p, const SubsetSchedule& ss,
                           const OracleModel& oracle = OracleModel::exact());

/// Average of KL(p || output_dist_fixed) over every ordered partition with the
/// schedule's block sizes. Guarded at 10^6 partitions.
double expected_kl_exact(const JointPMF& p, const Schedule& s);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Same expectation over `trials` sampled partitions. With `dedup`, partitions
/// are drawn without replacement and exhausting them gives the exact value.
Estimate expected_kl_mc(const JointPMF& p, const Schedule& s, std::uint64_t trials,
                        std::uint64_t seed, bool dedup = false);

/// Output law of the random sampler: uniform mixture over ordered partitions.
JointPMF mixture_output_dist(const JointPMF& p, const Schedule& s);

struct DecouplingResult {
  double kl_exact = 0.0;    // KL(p || nu), exact oracle
  double kl_learned = 0.0;  // KL(p || nu_hat), smoothed oracle
  double lhs = 0.0;         // kl_learned - kl_exact
  double rhs = 0.0;         // expected log-ratio of exact to smoothed rows
  double gap = 0.0;         // |lhs - rhs|
  // Residual of the orientation KL(p||nu) = KL(p||nu_hat) + rhs.
  double swapped_gap = 0.0;
};

DecouplingResult decoupling_check(const JointPMF& p, const SubsetSchedule& ss, double eta);

}  // namespace unmask
