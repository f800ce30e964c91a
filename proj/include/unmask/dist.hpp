#pragma once

// Exact discrete joint distributions over [q]^n and the quantities built on
// them. All information quantities are in bits (log base 2) and 0 log 0 = 0.
//
// Positions are 0-based. A tuple (x_0, ..., x_{n-1}) is stored at index
// sum_i x_i * q^(n-1-i): the first position is the most significant digit.

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace unmask {

inline constexpr double kProbabilityTolerance = 1e-12;
inline constexpr std::uint64_t kMaxTableSize = std::uint64_t{1} << 24;

/// q^n, or InfeasibleEnumeration when it exceeds kMaxTableSize.
std::size_t table_size(int q, int n);

class JointPMF {
 public:
  /// Validates the simplex invariants; throws NotADistribution on failure.
  JointPMF(int q, int n, std::vector<double> probs);

  int q() const noexcept { return q_; }
  int n() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t index) const { return probs_[index]; }

  std::size_t encode(std::span<const int> tuple) const;
  std::vector<int> decode(std::size_t index) const;

  /// Point mass at one tuple.
  static JointPMF point_mass(int q, std::span<const int> tuple);

 private:
  int q_;
  int n_;
  std::vector<double> probs_;
};

struct PartialAssignment {
  std::vector<std::pair<int, int>> pairs;  // (position, symbol)

  /// Throws PositionOutOfRange / InvalidArgument when pairs are not valid for
  /// a distribution of the given shape.
  void validate(int q, int n) const;
};

/// Conditional law of each free position given the pinned ones.
struct MarginalTable {
  std::map<int, std::vector<double>> rows;
};

double entropy_bits(std::span<const double> probs);
double entropy_bits(const JointPMF& p);

/// Law of X_S with positions in the order given (index-encoded in that order).
JointPMF marginalize(const JointPMF& p, std::span<const int> positions);

/// Law of the positions set in `mask`, in increasing position order. Works for
/// the empty mask (returns {1.0}).
std::vector<double> marginal_by_mask(const JointPMF& p, std::uint32_t mask);

/// Index of tuple `digits` restricted to `mask`, increasing position order.
std::size_t sub_index(std::span<const int> digits, std::uint32_t mask, int q);

/// Per-position conditional marginals given a partial assignment. A pinning of
/// zero probability yields uniform rows.
MarginalTable conditional_oracle(const JointPMF& p, const PartialAssignment& a);

/// KL(p || r) in bits; +infinity when p is not absolutely continuous w.r.t. r.
double kl_bits(const JointPMF& p, const JointPMF& r);
double kl_bits(std::span<const double> p, std::span<const double> r);

double tv(const JointPMF& p, const JointPMF& r);

}  // namespace unmask
