#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "unmask/error.hpp"
#include "unmask/rng.hpp"
#include "unmask/schedules.hpp"
#include "unmask/stepfit.hpp"

using namespace unmask;

namespace {

// Independent oracle: enumerate every set of piece starts (at most k pieces)
// and give each piece the best constant found by scanning the piece's own
// values (an L1-optimal constant is always one of them).
double brute_best_error(const std::vector<double>& f, int k) {
  const int n = static_cast<int>(f.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t cuts = 0; cuts < (1u << (n - 1)); ++cuts) {
    if (std::popcount(cuts) + 1 > k) continue;
    double err = 0.0;
    int a = 0;
    for (int b = 1; b <= n; ++b) {
      if (b < n && !((cuts >> (b - 1)) & 1u)) continue;
      double piece = std::numeric_limits<double>::infinity();
      for (int c = a; c < b; ++c) {
        double e = 0.0;
        for (int x = a; x < b; ++x) e += std::abs(f[x] - f[c]);
        piece = std::min(piece, e);
      }
      err += piece;
      a = b;
    }
    best = std::min(best, err);
  }
  return best;
}

std::vector<double> random_values(int n, std::uint64_t seed, bool monotone) {
  Rng rng(seed);
  std::vector<double> v;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double step = rng.uniform() < 0.3 ? 0.0 : static_cast<double>(rng.below(5));
    acc += step;
    v.push_back(monotone ? acc : static_cast<double>(rng.below(4)));
  }
  return v;
}

}  // namespace

TEST(Stepfit, TwoLevelExample) {
  const auto fit = best_k_piecewise(DiscreteCurve({0, 0, 1, 1}), 1);
  // Any constant in [0, 1] costs 2; the smallest median is chosen.
  EXPECT_DOUBLE_EQ(fit.error, 2.0);
  EXPECT_EQ(fit.starts, (std::vector<int>{1}));
  EXPECT_DOUBLE_EQ(fit.levels.front(), 0.0);
  EXPECT_DOUBLE_EQ(brute_best_error({0, 0, 1, 1}, 1), 2.0);
}

TEST(Stepfit, EnoughPiecesGiveZeroError) {
  const DiscreteCurve f({3, 3, 1, 1, 1, 4, 2, 2});
  EXPECT_EQ(count_runs(f), 4);
  EXPECT_DOUBLE_EQ(best_k_piecewise(f, 4).error, 0.0);
  EXPECT_DOUBLE_EQ(best_k_piecewise(f, 100).error, 0.0);
  EXPECT_GT(best_k_piecewise(f, 3).error, 0.0);
}

TEST(Stepfit, StepCurveTwoPieces) {
  const auto fit = best_k_piecewise(DiscreteCurve({0, 0, 0, 1, 1}), 2);
  EXPECT_DOUBLE_EQ(fit.error, 0.0);
  EXPECT_EQ(fit.starts, (std::vector<int>{1, 4}));
}

TEST(Stepfit, MatchesBruteForce) {
  for (int n = 1; n <= 9; ++n)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto v = random_values(n, 7 * n + seed, seed % 2 == 0);
      for (int k = 1; k <= n; ++k)
        EXPECT_NEAR(best_k_piecewise(DiscreteCurve(v), k).error, brute_best_error(v, k), 1e-10)
            << "n=" << n << " k=" << k;
    }
}

TEST(Stepfit, ErrorNonincreasingInK) {
  const DiscreteCurve f(random_values(30, 5, false));
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 30; ++k) {
    const double e = best_k_piecewise(f, k).error;
    EXPECT_LE(e, prev + 1e-12);
    prev = e;
  }
  EXPECT_DOUBLE_EQ(prev, 0.0);
}

TEST(Stepfit, FitFieldsReproduceError) {
  const DiscreteCurve f(random_values(25, 8, true));
  const auto fit = best_k_piecewise(f, 4);
  EXPECT_LE(fit.pieces(), 4);
  EXPECT_TRUE(std::is_sorted(fit.starts.begin(), fit.starts.end()));
  const auto h = fit.evaluate(f.n());
  double err = 0.0;
  for (int x = 1; x <= f.n(); ++x) err += std::abs(f[x] - h[x - 1]);
  EXPECT_NEAR(err, fit.error, 1e-10);
}

TEST(Stepfit, LeftEndpointModeReproducesNodeDp) {
  for (int n = 1; n <= 12; ++n) {
    const auto v = random_values(n, 300 + n, true);
    InfoCurve z;
    z.z = v;
    for (int k = 1; k <= n; ++k) {
      const auto left = best_k_piecewise(DiscreteCurve(v), k, LevelMode::kLeftEndpoint);
      const auto free = best_k_piecewise(DiscreteCurve(v), k, LevelMode::kFree);
      EXPECT_NEAR(left.error, optimal_nodes_dp(z, k).error, 1e-10) << "n=" << n << " k=" << k;
      EXPECT_LE(free.error, left.error + 1e-12);
    }
  }
}

TEST(Stepfit, HardCurveBlocks) {
  const int n = 1000;
  const double eps = 0.1;
  const auto hc = hard_curve(n, eps);
  const double ln_n = std::log(static_cast<double>(n));
  EXPECT_DOUBLE_EQ(hc.blocks.front().value, 1.0 / (4.0 * ln_n));
  for (const auto& b : hc.blocks) {
    EXPECT_EQ(b.first, static_cast<int>(std::floor(std::pow(1 + eps, b.index))));
    EXPECT_EQ(b.last,
              std::min(static_cast<int>(std::floor(std::pow(1 + eps, b.index + 1))) - 1, n));
    for (int x = b.first; x <= b.last; ++x) EXPECT_DOUBLE_EQ(hc.curve[x], b.value);
  }
  EXPECT_EQ(hc.blocks.back().last, n);
}

TEST(Stepfit, HardCurveTotalMassAtMostOne) {
  for (int n : {16, 100, 1000, 5000, 20000})
    for (double eps : {0.05, 0.1, 0.2, 1.0 / std::log(static_cast<double>(n))}) {
      const auto hc = hard_curve(n, eps);
      double total = 0.0;
      for (double v : hc.curve.values) total += v;
      EXPECT_LE(total, 1.0) << "n=" << n << " eps=" << eps;
    }
}

TEST(Stepfit, HardCurveRangeTag) {
  EXPECT_TRUE(hard_curve(1 << 12, 1.0 / std::log(4096.0)).in_lemma_range);
  EXPECT_FALSE(hard_curve(1 << 12, 0.5).in_lemma_range);   // above 1/ln n
  EXPECT_FALSE(hard_curve(16, 0.01).in_lemma_range);       // below (2/n) ln(2/eps)
  EXPECT_THROW(hard_curve(1, 0.1), Error);
  EXPECT_THROW(hard_curve(10, 0.0), Error);
}

TEST(Stepfit, LowerBoundExperimentRows) {
  const auto rows = lower_bound_experiment({256, 1024}, 0.0, 0.05);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_DOUBLE_EQ(r.eps, 1.0 / std::log(static_cast<double>(r.n)));
    EXPECT_EQ(r.k, std::max(1, static_cast<int>(std::floor(0.05 * std::log(r.n) / r.eps))));
    EXPECT_DOUBLE_EQ(r.ratio, r.best_error / r.eps);
  }
  EXPECT_THROW(lower_bound_experiment({}, 0.1, 0.05), Error);
}
