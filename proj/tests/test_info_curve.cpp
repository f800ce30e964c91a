#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "unmask/error.hpp"
#include "unmask/info_curve.hpp"
#include "unmask/rng.hpp"
#include "unmask/zoo.hpp"

using namespace unmask;

namespace {

JointPMF random_pmf(int q, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(table_size(q, n));
  double total = 0.0;
  for (double& v : p) total += (v = rng.uniform() + 1e-3);
  for (double& v : p) v /= total;
  return JointPMF(q, n, std::move(p));
}

// Independent oracle: average entropy over subsets by direct summation of the
// joint table for every subset mask.
std::vector<double> brute_entropy_curve(const JointPMF& p) {
  const int n = p.n();
  const int q = p.q();
  std::vector<double> sum(n + 1, 0.0);
  std::vector<int> count(n + 1, 0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<double> marg(table_size(q, n), 0.0);
    for (std::size_t idx = 0; idx < p.size(); ++idx) {
      const auto x = p.decode(idx);
      std::size_t key = 0;
      for (int i = 0; i < n; ++i) key = key * q + ((mask >> i) & 1u ? x[i] : 0);
      marg[key] += p[idx];
    }
    double h = 0.0;
    for (double v : marg)
      if (v > 0) h -= v * std::log2(v);
    const int size = std::popcount(mask);
    sum[size] += h;
    ++count[size];
  }
  for (int i = 0; i <= n; ++i) sum[i] /= count[i];
  return sum;
}

}  // namespace

TEST(InfoCurve, ExactMatchesBruteForce) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const JointPMF p = random_pmf(seed % 2 ? 2 : 3, 4, seed);
    const auto h = entropy_curve_exact(p);
    const auto oracle = brute_entropy_curve(p);
    ASSERT_EQ(h.h.size(), oracle.size());
    for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(h.h[i], oracle[i], 1e-12);
  }
}

TEST(InfoCurve, ProductDistributionHasZeroCurve) {
  // Independent Bernoulli(0.3) coordinates.
  const double a = 0.3;
  std::vector<double> probs(8);
  for (int idx = 0; idx < 8; ++idx) {
    double v = 1.0;
    for (int b = 0; b < 3; ++b) v *= (idx >> b) & 1 ? a : 1 - a;
    probs[idx] = v;
  }
  const JointPMF p(2, 3, probs);
  const auto z = info_curve_from_entropy(entropy_curve_exact(p));
  for (double v : z.z) EXPECT_NEAR(v, 0.0, 1e-12);
  const auto s = tc_dtc_from_curve(z);
  EXPECT_NEAR(s.tc, 0.0, 1e-12);
  EXPECT_NEAR(s.dtc, 0.0, 1e-12);
}

TEST(InfoCurve, CorrelatedPair) {
  const JointPMF p(2, 2, {0.5, 0.0, 0.0, 0.5});
  const auto z = info_curve_from_entropy(entropy_curve_exact(p));
  EXPECT_NEAR(z[1], 0.0, 1e-15);
  EXPECT_NEAR(z[2], 1.0, 1e-15);
  const auto s = tc_dtc_from_curve(z);
  EXPECT_NEAR(s.tc, 1.0, 1e-15);
  EXPECT_NEAR(s.dtc, 1.0, 1e-15);
  EXPECT_NEAR(tc_direct(p), 1.0, 1e-15);
  EXPECT_NEAR(dtc_direct(p), 1.0, 1e-15);
}

TEST(InfoCurve, TcDtcIdentityOnRandomDistributions) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const JointPMF p = random_pmf(2 + seed % 2, 4, seed);
    const auto z = info_curve_from_entropy(entropy_curve_exact(p));
    const auto s = tc_dtc_from_curve(z);
    EXPECT_NEAR(s.tc, tc_direct(p), 1e-10);
    EXPECT_NEAR(s.dtc, dtc_direct(p), 1e-10);
    EXPECT_NEAR(s.tc + s.dtc, z.n() * z[z.n()], 1e-10);
    EXPECT_EQ(find_han_violation(z), 0);
  }
}

TEST(InfoCurve, HanViolationStrictAndLenient) {
  EntropyCurve h;
  h.h = {0.0, 1.0, 1.5, 3.0};  // Z = (0, 0.5, -0.5)
  try {
    info_curve_from_entropy(h, HanCheck::kStrict);
    FAIL() << "expected HanViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kHanViolation);
  }
  const auto z = info_curve_from_entropy(h, HanCheck::kLenient);
  EXPECT_DOUBLE_EQ(z[3], 0.0);  // clamped
  EXPECT_EQ(find_han_violation(z), 3);
}

TEST(InfoCurve, TinyNegativeIsClamped) {
  EntropyCurve h;
  h.h = {0.0, 1.0, 2.0 + 5e-10};
  const auto z = info_curve_from_entropy(h);
  EXPECT_DOUBLE_EQ(z[2], 0.0);
}

TEST(InfoCurve, MonteCarloExhaustiveEqualsExact) {
  const JointPMF p = random_pmf(2, 5, 3);
  const auto exact = entropy_curve_exact(p);
  const auto mc = entropy_curve_mc(p, 100, 7, /*dedup=*/true);
  for (int i = 0; i <= 5; ++i) {
    EXPECT_NEAR(mc.h[i], exact.h[i], 1e-12);
    EXPECT_DOUBLE_EQ(mc.std_error[i], 0.0);
  }
}

TEST(InfoCurve, MonteCarloWithinStandardErrors) {
  const JointPMF p = random_pmf(2, 8, 11);
  const auto exact = info_curve_from_entropy(entropy_curve_exact(p));
  const auto mc = info_curve_from_entropy(entropy_curve_mc(p, 20, 5), HanCheck::kLenient);
  for (int j = 1; j <= 8; ++j)
    EXPECT_LE(std::abs(mc[j] - exact[j]), 4.0 * mc.z_stderr[j - 1] + 1e-9) << "j=" << j;
}

TEST(InfoCurve, MonteCarloIsDeterministic) {
  const JointPMF p = random_pmf(2, 6, 2);
  const auto a = entropy_curve_mc(p, 5, 42);
  const auto b = entropy_curve_mc(p, 5, 42);
  EXPECT_EQ(a.h, b.h);
}

TEST(InfoCurve, ExactLengthGuard) {
  EXPECT_THROW(entropy_curve_exact(uniform_dist(2, 21)), Error);
}
