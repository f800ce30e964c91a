#include "unmask/dist.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "unmask/error.hpp"

namespace unmask {

std::size_t table_size(int q, int n) {
  if (q < 2) fail(ErrorCode::kInvalidArgument, "alphabet size must be >= 2");
  if (n < 1) fail(ErrorCode::kInvalidArgument, "sequence length must be >= 1");
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) {
    size *= static_cast<std::uint64_t>(q);
    if (size > kMaxTableSize)
      fail(ErrorCode::kInfeasibleEnumeration,
           "q^n = " + std::to_string(q) + "^" + std::to_string(n) +
               " exceeds the 2^24 table guard");
  }
  return static_cast<std::size_t>(size);
}

JointPMF::JointPMF(int q, int n, std::vector<double> probs)
    : q_(q), n_(n), probs_(std::move(probs)) {
  const std::size_t expected = table_size(q, n);
  if (probs_.size() != expected)
    fail(ErrorCode::kNotADistribution,
         "table has " + std::to_string(probs_.size()) + " entries, expected " +
             std::to_string(expected));
  double total = 0.0;
  for (double v : probs_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      fail(ErrorCode::kNotADistribution, "negative or non-finite probability");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbabilityTolerance)
    fail(ErrorCode::kNotADistribution,
         "probabilities sum to " + std::to_string(total));
}

std::size_t JointPMF::encode(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != n_)
    fail(ErrorCode::kDimensionMismatch, "tuple length differs from n");
  std::size_t index = 0;
  for (int x : tuple) {
    if (x < 0 || x >= q_) fail(ErrorCode::kInvalidArgument, "symbol outside alphabet");
    index = index * q_ + x;
  }
  return index;
}

std::vector<int> JointPMF::decode(std::size_t index) const {
  std::vector<int> tuple(n_);
  for (int i = n_ - 1; i >= 0; --i) {
    tuple[i] = static_cast<int>(index % q_);
    index /= q_;
  }
  return tuple;
}

JointPMF JointPMF::point_mass(int q, std::span<const int> tuple) {
  const int n = static_cast<int>(tuple.size());
  std::vector<double> probs(table_size(q, n), 0.0);
  std::size_t index = 0;
  for (int x : tuple) index = index * q + x;
  probs.at(index) = 1.0;
  return JointPMF(q, n, std::move(probs));
}

void PartialAssignment::validate(int q, int n) const {
  std::uint64_t seen = 0;
  for (auto [pos, sym] : pairs) {
    if (pos < 0 || pos >= n)
      fail(ErrorCode::kPositionOutOfRange, "position " + std::to_string(pos));
    if (sym < 0 || sym >= q)
      fail(ErrorCode::kInvalidArgument, "symbol " + std::to_string(sym));
    if (seen & (std::uint64_t{1} << pos))
      fail(ErrorCode::kInvalidArgument, "position assigned twice");
    seen |= std::uint64_t{1} << pos;
  }
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double v : probs)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

double entropy_bits(const JointPMF& p) { return entropy_bits(p.probs()); }

namespace {

// Odometer over all tuples, keeping the digit vector in sync with the index.
void increment(std::vector<int>& digits, int q) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < q) return;
    digits[i] = 0;
  }
}

}  // namespace

JointPMF marginalize(const JointPMF& p, std::span<const int> positions) {
  const int n = p.n();
  const int q = p.q();
  std::uint64_t seen = 0;
  for (int pos : positions) {
    if (pos < 0 || pos >= n)
      fail(ErrorCode::kPositionOutOfRange, "position " + std::to_string(pos));
    if (seen & (std::uint64_t{1} << pos))
      fail(ErrorCode::kInvalidArgument, "repeated position in marginal");
    seen |= std::uint64_t{1} << pos;
  }
  if (positions.empty())
    fail(ErrorCode::kInvalidArgument, "marginal over no positions");
  std::vector<double> out(table_size(q, static_cast<int>(positions.size())), 0.0);
  std::vector<int> digits(n, 0);
  for (std::size_t idx = 0; idx < p.size(); ++idx, increment(digits, q)) {
    std::size_t j = 0;
    for (int pos : positions) j = j * q + digits[pos];
    out[j] += p[idx];
  }
  return JointPMF(q, static_cast<int>(positions.size()), std::move(out));
}

std::size_t sub_index(std::span<const int> digits, std::uint32_t mask, int q) {
  std::size_t j = 0;
  for (std::size_t pos = 0; pos < digits.size(); ++pos)
    if (mask & (1u << pos)) j = j * q + digits[pos];
  return j;
}

std::vector<double> marginal_by_mask(const JointPMF& p, std::uint32_t mask) {
  const int q = p.q();
  const int width = std::popcount(mask);
  std::size_t size = 1;
  for (int i = 0; i < width; ++i) size *= q;
  std::vector<double> out(size, 0.0);
  std::vector<int> digits(p.n(), 0);
  for (std::size_t idx = 0; idx < p.size(); ++idx, increment(digits, q))
    out[sub_index(digits, mask, q)] += p[idx];
  return out;
}

MarginalTable conditional_oracle(const JointPMF& p, const PartialAssignment& a) {
  const int n = p.n();
  const int q = p.q();
  a.validate(q, n);
  std::vector<int> pinned(n, -1);
  for (auto [pos, sym] : a.pairs) pinned[pos] = sym;

  std::vector<std::vector<double>> acc(n, std::vector<double>(q, 0.0));
  double mass = 0.0;
  std::vector<int> digits(n, 0);
  for (std::size_t idx = 0; idx < p.size(); ++idx, increment(digits, q)) {
    if (p[idx] == 0.0) continue;
    bool match = true;
    for (int i = 0; i < n && match; ++i)
      match = pinned[i] < 0 || pinned[i] == digits[i];
    if (!match) continue;
    mass += p[idx];
    for (int i = 0; i < n; ++i)
      if (pinned[i] < 0) acc[i][digits[i]] += p[idx];
  }

  MarginalTable table;
  for (int i = 0; i < n; ++i) {
    if (pinned[i] >= 0) continue;
    std::vector<double> row(q, 1.0 / q);
    if (mass > 0.0)
      for (int s = 0; s < q; ++s) row[s] = acc[i][s] / mass;
    table.rows.emplace(i, std::move(row));
  }
  return table;
}

double kl_bits(std::span<const double> p, std::span<const double> r) {
  if (p.size() != r.size())
    fail(ErrorCode::kDimensionMismatch, "KL between tables of different size");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (r[i] <= 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log2(p[i] / r[i]);
  }
  return kl;
}

double kl_bits(const JointPMF& p, const JointPMF& r) {
  if (p.n() != r.n() || p.q() != r.q())
    fail(ErrorCode::kDimensionMismatch, "KL between distributions of different shape");
  return kl_bits(p.probs(), r.probs());
}

double tv(const JointPMF& p, const JointPMF& r) {
  if (p.n() != r.n() || p.q() != r.q())
    fail(ErrorCode::kDimensionMismatch, "TV between distributions of different shape");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - r[i]);
  return 0.5 * sum;
}

}  // namespace unmask
