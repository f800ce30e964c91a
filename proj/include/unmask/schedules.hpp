#pragma once

// Unmasking schedules, their left-Riemann error on an information curve, the
// optimal-node dynamic program and the closed-form schedule constructors.
//
// Steps and nodes are 1-based counts/indices as they appear in the curve:
// node N_a = 1 + s_1 + ... + s_{a-1}.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unmask/info_curve.hpp"

namespace unmask {

class Schedule {
 public:
  /// Throws InvalidArgument unless every step is >= 1 and there is at least one.
  explicit Schedule(std::vector<int> steps);

  static Schedule all_singles(int n);
  static Schedule one_shot(int n);

  const std::vector<int>& steps() const noexcept { return steps_; }
  int k() const noexcept { return static_cast<int>(steps_.size()); }
  int n() const noexcept { return n_; }
  int max_step() const noexcept;

  bool operator==(const Schedule&) const = default;

 private:
  std::vector<int> steps_;
  int n_ = 0;
};

struct NodeVector {
  std::vector<int> nodes;  // 1 = N_1 < N_2 < ... < N_k <= n
  bool operator==(const NodeVector&) const = default;
};

enum class ScheduleSource { kDp, kTc, kDtc, kAustin, kSingles, kOneShot, kCustom };

const char* source_name(ScheduleSource source) noexcept;
ScheduleSource parse_source(const std::string& name);

struct ScheduleReport {
  Schedule schedule;
  double predicted_kl = 0.0;
  std::optional<double> bound_licai;
  ScheduleSource source = ScheduleSource::kCustom;
  std::vector<int> nodes;  // filled for DP plans

  int k() const noexcept { return schedule.k(); }
};

NodeVector schedule_to_nodes(const Schedule& s);

/// Inverse of schedule_to_nodes; the last step runs from N_k to n. Throws
/// NonMonotoneNodes unless 1 = N_1 < ... < N_k <= n.
Schedule nodes_to_schedule(const NodeVector& nodes, int n);

/// ||Z - Z^N||_1 for the schedule's nodes; equals the expected KL error of the
/// random unmasking sampler.
double riemann_error(const InfoCurve& z, const Schedule& s);

/// The stepped sequence Z^N_1..Z^N_n.
std::vector<double> left_riemann_seq(const InfoCurve& z, const NodeVector& nodes);

struct OptimalNodes {
  NodeVector nodes;
  double error = 0.0;
};

/// Minimizes ||Z - Z^N||_1 over node vectors with exactly k nodes in O(n^2 k).
/// Ties go to the lexicographically smallest node vector.
OptimalNodes optimal_nodes_dp(const InfoCurve& z, int k);

/// Geometrically shrinking steps followed by unit steps; error <= eps for any
/// distribution with TC <= tc_hat.
Schedule tc_schedule(double tc_hat, double eps, int n);

/// Unit steps followed by geometrically growing steps (the reverse of
/// tc_schedule); error <= eps whenever DTC <= dtc_hat.
Schedule dtc_schedule(double dtc_hat, double eps, int n);

/// floor(sqrt(dtc_hat n / eps)) unit steps, then ceil(sqrt(dtc_hat n / eps))
/// near-equal blocks with the larger blocks last. dtc_hat = 0 gives one shot.
Schedule austin_schedule(double dtc_hat, double eps, int n);

/// 2 + (1 + ln n)(1 + ceil(hat / eps)).
double tc_dtc_round_bound(double hat, double eps, int n);

/// Constant in the Austin round bound k <= C * max(1, sqrt(DTC n / eps)). The
/// schedule uses floor(x) + ceil(x) <= 2x + 1 rounds for x = sqrt(DTC n / eps),
/// which is at most 3x once x >= 1; below that a single round suffices.
inline constexpr double kAustinRoundConstant = 3.0;
double austin_round_bound(double dtc_hat, double eps, int n);

/// (2^ceil(log2 s_max) - 1) / n * (tc + dtc).
double licai_bound(const CorrelationSummary& summary, int s_max, int n);

enum class GridBound {
  kValue,     // eps <= 2^i, the default
  kExponent,  // eps <= i, the literal reading of the exponent range
};

/// Powers of two from the grid floor up to the smallest power of two at or
/// above n log2 q.
std::vector<double> sweep_values(int n, int q, double eps,
                                 GridBound bound = GridBound::kValue);

/// Cross product of sweep_values with itself, as (tc_hat, dtc_hat).
std::vector<std::pair<double, double>> sweep_grid(int n, int q, double eps,
                                                  GridBound bound = GridBound::kValue);

}  // namespace unmask
