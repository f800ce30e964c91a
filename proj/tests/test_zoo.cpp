#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "unmask/error.hpp"
#include "unmask/info_curve.hpp"
#include "unmask/zoo.hpp"

using namespace unmask;

namespace {

InfoCurve exact_curve(const JointPMF& p) {
  return info_curve_from_entropy(entropy_curve_exact(p));
}

void expect_code(ErrorCode code, auto&& body) {
  try {
    body();
    FAIL() << "expected " << error_code_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Zoo, PrimesAndRank) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(11));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(9));
  EXPECT_EQ(rank_mod_q({{1, 2}, {2, 4}}, 7), 1);
  EXPECT_EQ(rank_mod_q({{1, 2}, {2, 5}}, 7), 2);
  EXPECT_EQ(rank_mod_q({{1, 1}, {1, 4}}, 3), 1);  // 4 = 1 mod 3
}

TEST(Zoo, UniformHasFlatCurve) {
  const auto z = exact_curve(uniform_dist(3, 4));
  for (double v : z.z) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Zoo, ReedSolomonStepCurve) {
  const double l = std::log2(7.0);
  for (int k = 1; k <= 4; ++k) {
    const auto code = rs_code(7, k, {0, 1, 2, 3, 4}, {0, 0, 0, 0, 0});
    EXPECT_TRUE(mds_check(code));
    const auto z = exact_curve(code_dist(code));
    for (int j = 1; j <= 5; ++j) EXPECT_NEAR(z[j], j > k ? l : 0.0, 1e-9) << "k=" << k;
  }
}

// Closed forms for a uniform affine code of dimension d: TC = (n - d - kappa)
// log q with kappa the number of zero generator columns, DTC = (d - ell) log q
// with ell the number of columns outside the span of the other columns. The
// counts below are read off each generator by hand.
TEST(Zoo, AffineCodeCorrelationClosedForms) {
  struct Case {
    int q;
    std::vector<std::vector<int>> g;
    int kappa;
    int ell;
  };
  const std::vector<Case> cases{
      {3, {{1, 0, 1, 0}, {0, 1, 1, 0}}, 1, 0},
      {3, {{1, 0, 0}, {0, 1, 1}}, 0, 1},
      {2, {{1, 0, 1}, {0, 1, 1}}, 0, 0},
      {5, {{1, 0, 0, 0}, {0, 1, 0, 0}}, 2, 2},
      {7, {{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}}, 0, 0},
  };
  for (const auto& c : cases) {
    const int n = static_cast<int>(c.g.front().size());
    const int d = static_cast<int>(c.g.size());
    const AffineCode code(c.q, c.g, std::vector<int>(n, 1));
    const JointPMF p = code_dist(code);
    const auto s = tc_dtc_from_curve(exact_curve(p));
    const double lq = std::log2(static_cast<double>(c.q));
    EXPECT_NEAR(s.tc, (n - d - c.kappa) * lq, 1e-9);
    EXPECT_NEAR(s.dtc, (d - c.ell) * lq, 1e-9);
    EXPECT_NEAR(tc_direct(p), (n - d - c.kappa) * lq, 1e-9);
    EXPECT_NEAR(dtc_direct(p), (d - c.ell) * lq, 1e-9);
  }
}

TEST(Zoo, CodeErrors) {
  expect_code(ErrorCode::kNotPrime, [] { rs_code(4, 2, {0, 1, 2}, {0, 0, 0}); });
  expect_code(ErrorCode::kFieldTooSmall, [] { rs_code(3, 2, {0, 1, 2, 3, 4}, {0, 0, 0, 0, 0}); });
  expect_code(ErrorCode::kDuplicateEvalPoints, [] { rs_code(7, 2, {0, 1, 1}, {0, 0, 0}); });
  expect_code(ErrorCode::kInvalidArgument, [] { rs_code(7, 3, {0, 1, 2}, {0, 0, 0}); });
  expect_code(ErrorCode::kRankDeficient, [] { AffineCode(5, {{1, 2}, {2, 4}}, {0, 0}); });
  expect_code(ErrorCode::kNotPrime, [] { AffineCode(6, {{1, 0}}, {0, 0}); });
}

TEST(Zoo, MdsCheckDetectsDependentColumns) {
  EXPECT_FALSE(mds_check(AffineCode(3, {{1, 0, 1, 0}, {0, 1, 1, 0}}, {0, 0, 0, 0})));
  EXPECT_TRUE(mds_check(AffineCode(2, {{1, 0, 1}, {0, 1, 1}}, {0, 0, 0})));
}

TEST(Zoo, ExtendabilityMatchesEnumeration) {
  const auto code = rs_code(5, 2, {0, 1, 2, 3}, {1, 2, 3, 4});
  const JointPMF p = code_dist(code);
  // Oracle: a pinning is extendable iff some codeword (mass > 0) agrees.
  const std::vector<int> pos{0, 2, 3};
  int extendable = 0;
  for (int a = 0; a < 5; ++a)
    for (int b = 0; b < 5; ++b)
      for (int c = 0; c < 5; ++c) {
        bool found = false;
        for (std::size_t idx = 0; idx < p.size() && !found; ++idx) {
          const auto x = p.decode(idx);
          found = p[idx] > 0 && x[0] == a && x[2] == b && x[3] == c;
        }
        EXPECT_EQ(code.extendable(pos, {a, b, c}), found);
        extendable += found;
      }
  EXPECT_EQ(extendable, 25);  // q^k of the q^3 pinnings
}

TEST(Zoo, BalancedShiftIsReproducible) {
  const auto a = random_balanced_rs(7, 2, 5, 99);
  const auto b = random_balanced_rs(7, 2, 5, 99);
  EXPECT_EQ(a.shift(), b.shift());
  EXPECT_TRUE(mds_check(a));
}

TEST(Zoo, ProductMixtureEntry) {
  ProductMixtureSpec spec{{0.25, 0.75},
                          {{{0.9, 0.1}, {0.6, 0.4}}, {{0.2, 0.8}, {0.5, 0.5}}}};
  const JointPMF p = product_mixture(spec);
  // P(x0 = 1, x1 = 0) = 0.25 * 0.1 * 0.6 + 0.75 * 0.8 * 0.5
  EXPECT_NEAR(p[0b10], 0.25 * 0.1 * 0.6 + 0.75 * 0.8 * 0.5, 1e-15);
  spec.weights = {0.5, 0.6};
  EXPECT_THROW(product_mixture(spec), Error);
}

TEST(Zoo, PairProductCurvesAdd) {
  const JointPMF base(2, 3, {0.3, 0.05, 0.05, 0.1, 0.05, 0.1, 0.1, 0.25});
  const auto code = rs_code(3, 1, {0, 1, 2}, {0, 0, 0});
  const JointPMF lifted = elevated_family(base, code);
  EXPECT_EQ(lifted.q(), 6);
  const auto zb = exact_curve(base);
  const auto zc = exact_curve(code_dist(code));
  const auto z = exact_curve(lifted);
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR(z[j], zb[j] + zc[j], 1e-10);
}
