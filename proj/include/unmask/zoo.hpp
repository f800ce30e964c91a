#pragma once

// Benchmark distribution families: uniform, affine codes over a prime field
// (including Reed-Solomon / MDS codes and their balanced random shifts),
// mixtures of product distributions, and the elevated product family.

#include <cstdint>
#include <vector>

#include "unmask/dist.hpp"

namespace unmask {

bool is_prime(int q);

/// Rank of a row-major rows x cols matrix over F_q (q prime).
int rank_mod_q(std::vector<std::vector<int>> rows, int q);

/// Affine code {u^T G + shift : u in F_q^k} with G a full-rank k x n matrix.
class AffineCode {
 public:
  /// Throws NotPrime, RankDeficient or InvalidArgument.
  AffineCode(int q, std::vector<std::vector<int>> generator, std::vector<int> shift);

  int q() const noexcept { return q_; }
  int n() const noexcept { return n_; }
  int k() const noexcept { return static_cast<int>(generator_.size()); }
  const std::vector<std::vector<int>>& generator() const noexcept { return generator_; }
  const std::vector<int>& shift() const noexcept { return shift_; }

  /// True when some codeword x* has x*_S = values (positions 0-based).
  bool extendable(const std::vector<int>& positions, const std::vector<int>& values) const;

 private:
  int q_;
  int n_;
  std::vector<std::vector<int>> generator_;
  std::vector<int> shift_;
};

JointPMF uniform_dist(int q, int n);

/// Mass q^-k on every codeword.
JointPMF code_dist(const AffineCode& code);

/// Reed-Solomon code with Vandermonde rows (a_j^i), i = 0..k-1. Requires a
/// prime q >= n, distinct evaluation points in [0, q) and 1 <= k < n.
AffineCode rs_code(int q, int k, const std::vector<int>& eval_points,
                   const std::vector<int>& shift);

inline constexpr std::uint64_t kMaxMdsSubsets = 1'000'000;

/// True iff every k-subset of generator columns has rank k.
bool mds_check(const AffineCode& code);

/// RS code on points 0..n-1 with a uniformly random shift drawn from `seed`.
AffineCode random_balanced_rs(int q, int k, int n, std::uint64_t seed);

struct ProductMixtureSpec {
  std::vector<double> weights;                          // length m, sums to 1
  std::vector<std::vector<std::vector<double>>> components;  // m x n x q
};

JointPMF product_mixture(const ProductMixtureSpec& spec);

/// Law of the independent pair (base, Unif(code)) over the product alphabet,
/// symbol (sigma, v) encoded as sigma * q + v.
JointPMF elevated_family(const JointPMF& base, const AffineCode& code);

/// Independent pair (a, b) of equal-length distributions read position by
/// position over the product alphabet; symbol (x, y) is x * b.q() + y. The
/// information curve of the result is Z(a) + Z(b).
JointPMF pair_product(const JointPMF& a, const JointPMF& b);

}  // namespace unmask
