#include "unmask/zoo.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "unmask/combinatorics.hpp"
#include "unmask/error.hpp"
#include "unmask/rng.hpp"

namespace unmask {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

namespace {

int mod(long long a, int q) {
  const long long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

int inverse_mod(int a, int q) {
  // Fermat: a^(q-2) mod q.
  long long result = 1;
  long long base = a;
  for (int e = q - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
  }
  return static_cast<int>(result);
}

}  // namespace

int rank_mod_q(std::vector<std::vector<int>> rows, int q) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && mod(rows[pivot][c], q) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const int inv = inverse_mod(mod(rows[rank][c], q), q);
    for (auto& v : rows[rank]) v = mod(static_cast<long long>(v) * inv, q);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank)) continue;
      const int factor = mod(rows[r][c], q);
      if (factor == 0) continue;
      for (std::size_t j = 0; j < cols; ++j)
        rows[r][j] = mod(rows[r][j] - static_cast<long long>(factor) * rows[rank][j], q);
    }
    ++rank;
  }
  return rank;
}

AffineCode::AffineCode(int q, std::vector<std::vector<int>> generator, std::vector<int> shift)
    : q_(q), n_(static_cast<int>(shift.size())), generator_(std::move(generator)),
      shift_(std::move(shift)) {
  if (!is_prime(q)) fail(ErrorCode::kNotPrime, std::to_string(q) + " is not prime");
  const int k = static_cast<int>(generator_.size());
  if (k < 1 || k > n_) fail(ErrorCode::kInvalidArgument, "need 1 <= k <= n");
  for (auto& row : generator_) {
    if (static_cast<int>(row.size()) != n_)
      fail(ErrorCode::kDimensionMismatch, "generator row length differs from shift length");
    for (auto& v : row) v = mod(v, q);
  }
  for (auto& v : shift_) v = mod(v, q);
  if (rank_mod_q(generator_, q) != k)
    fail(ErrorCode::kRankDeficient, "generator rank below k = " + std::to_string(k));
}

bool AffineCode::extendable(const std::vector<int>& positions,
                            const std::vector<int>& values) const {
  if (positions.size() != values.size())
    fail(ErrorCode::kDimensionMismatch, "positions and values differ in length");
  // target - shift must lie in the row space of G restricted to positions.
  std::vector<std::vector<int>> rows;
  for (const auto& g : generator_) {
    std::vector<int> r;
    for (int pos : positions) r.push_back(g.at(pos));
    rows.push_back(std::move(r));
  }
  const int base = rank_mod_q(rows, q_);
  std::vector<int> target;
  for (std::size_t i = 0; i < positions.size(); ++i)
    target.push_back(mod(values[i] - shift_.at(positions[i]), q_));
  rows.push_back(std::move(target));
  return rank_mod_q(std::move(rows), q_) == base;
}

JointPMF uniform_dist(int q, int n) {
  const std::size_t size = table_size(q, n);
  return JointPMF(q, n, std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

JointPMF code_dist(const AffineCode& code) {
  const int q = code.q();
  const int n = code.n();
  const int k = code.k();
  std::vector<double> probs(table_size(q, n), 0.0);
  const std::size_t words = table_size(q, k);
  const double mass = 1.0 / static_cast<double>(words);
  std::vector<int> u(k, 0);
  for (std::size_t w = 0; w < words; ++w) {
    std::size_t index = 0;
    for (int j = 0; j < n; ++j) {
      long long x = code.shift()[j];
      for (int i = 0; i < k; ++i) x += static_cast<long long>(u[i]) * code.generator()[i][j];
      index = index * q + mod(x, q);
    }
    probs[index] += mass;
    for (int i = k - 1; i >= 0; --i) {
      if (++u[i] < q) break;
      u[i] = 0;
    }
  }
  return JointPMF(q, n, std::move(probs));
}

AffineCode rs_code(int q, int k, const std::vector<int>& eval_points,
                   const std::vector<int>& shift) {
  const int n = static_cast<int>(eval_points.size());
  if (!is_prime(q)) fail(ErrorCode::kNotPrime, std::to_string(q) + " is not prime");
  if (q < n) fail(ErrorCode::kFieldTooSmall, "RS codes need q >= n");
  if (k < 1 || k >= n) fail(ErrorCode::kInvalidArgument, "RS codes need 1 <= k < n");
  if (static_cast<int>(shift.size()) != n)
    fail(ErrorCode::kDimensionMismatch, "shift length differs from number of points");
  std::set<int> seen;
  for (int a : eval_points) {
    if (a < 0 || a >= q) fail(ErrorCode::kInvalidArgument, "evaluation point outside F_q");
    if (!seen.insert(a).second) fail(ErrorCode::kDuplicateEvalPoints, "evaluation points repeat");
  }
  std::vector<std::vector<int>> generator(k, std::vector<int>(n));
  for (int j = 0; j < n; ++j) {
    long long power = 1;
    for (int i = 0; i < k; ++i) {
      generator[i][j] = static_cast<int>(power);
      power = power * eval_points[j] % q;
    }
  }
  return AffineCode(q, std::move(generator), shift);
}

bool mds_check(const AffineCode& code) {
  const int n = code.n();
  const int k = code.k();
  if (binomial(n, k) > kMaxMdsSubsets)
    fail(ErrorCode::kInfeasibleEnumeration, "too many column subsets to check");
  bool ok = true;
  for_each_subset(n, k, [&](std::uint32_t mask) {
    if (!ok) return;
    std::vector<std::vector<int>> rows;
    for (const auto& g : code.generator()) {
      std::vector<int> r;
      for (int j = 0; j < n; ++j)
        if (mask & (1u << j)) r.push_back(g[j]);
      rows.push_back(std::move(r));
    }
    ok = rank_mod_q(std::move(rows), code.q()) == k;
  });
  return ok;
}

AffineCode random_balanced_rs(int q, int k, int n, std::uint64_t seed) {
  std::vector<int> points(n);
  std::iota(points.begin(), points.end(), 0);
  Rng rng(seed);
  std::vector<int> shift(n);
  for (auto& v : shift) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(q)));
  return rs_code(q, k, points, shift);
}

JointPMF product_mixture(const ProductMixtureSpec& spec) {
  if (spec.weights.empty() || spec.weights.size() != spec.components.size())
    fail(ErrorCode::kInvalidArgument, "mixture needs one weight per component");
  const int n = static_cast<int>(spec.components.front().size());
  if (n < 1) fail(ErrorCode::kInvalidArgument, "components need at least one position");
  const int q = static_cast<int>(spec.components.front().front().size());
  double wsum = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0)) fail(ErrorCode::kNotADistribution, "negative mixture weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kProbabilityTolerance)
    fail(ErrorCode::kNotADistribution, "mixture weights do not sum to 1");
  for (const auto& comp : spec.components) {
    if (static_cast<int>(comp.size()) != n)
      fail(ErrorCode::kDimensionMismatch, "components differ in length");
    for (const auto& row : comp) {
      if (static_cast<int>(row.size()) != q)
        fail(ErrorCode::kDimensionMismatch, "component rows differ in alphabet size");
      double rs = 0.0;
      for (double v : row) {
        if (!(v >= 0.0)) fail(ErrorCode::kNotADistribution, "negative component probability");
        rs += v;
      }
      if (std::abs(rs - 1.0) > kProbabilityTolerance)
        fail(ErrorCode::kNotADistribution, "component row does not sum to 1");
    }
  }

  const std::size_t size = table_size(q, n);
  std::vector<double> probs(size, 0.0);
  std::vector<int> digits(n, 0);
  for (std::size_t idx = 0; idx < size; ++idx) {
    double total = 0.0;
    for (std::size_t m = 0; m < spec.weights.size(); ++m) {
      double prod = spec.weights[m];
      for (int i = 0; i < n && prod > 0.0; ++i) prod *= spec.components[m][i][digits[i]];
      total += prod;
    }
    probs[idx] = total;
    for (int i = n - 1; i >= 0; --i) {
      if (++digits[i] < q) break;
      digits[i] = 0;
    }
  }
  return JointPMF(q, n, std::move(probs));
}

JointPMF pair_product(const JointPMF& a, const JointPMF& b) {
  if (a.n() != b.n()) fail(ErrorCode::kDimensionMismatch, "factor lengths differ");
  const int n = a.n();
  const int qb = b.q();
  const int q = a.q() * qb;
  std::vector<double> probs(table_size(q, n), 0.0);
  for (std::size_t ai = 0; ai < a.size(); ++ai) {
    if (a[ai] == 0.0) continue;
    const auto sigma = a.decode(ai);
    for (std::size_t bi = 0; bi < b.size(); ++bi) {
      if (b[bi] == 0.0) continue;
      const auto v = b.decode(bi);
      std::size_t index = 0;
      for (int i = 0; i < n; ++i) index = index * q + (sigma[i] * qb + v[i]);
      probs[index] += a[ai] * b[bi];
    }
  }
  return JointPMF(q, n, std::move(probs));
}

JointPMF elevated_family(const JointPMF& base, const AffineCode& code) {
  if (base.n() != code.n())
    fail(ErrorCode::kDimensionMismatch, "base and code lengths differ");
  return pair_product(base, code_dist(code));
}

}  // namespace unmask
