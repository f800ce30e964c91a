#pragma once

// Optimal k-piecewise-constant L1 fits of a discrete curve, the slowly
// decaying block curve that defeats every fit with too few pieces, and the
// experiment that measures that gap.

#include <vector>

namespace unmask {

/// Values f(1)..f(n), all non-negative. Positions are 1-based.
struct DiscreteCurve {
  std::vector<double> values;

  /// Throws InvalidArgument when empty or when a value is negative or NaN.
  explicit DiscreteCurve(std::vector<double> v);
  int n() const noexcept { return static_cast<int>(values.size()); }
  double operator[](int x) const { return values[x - 1]; }
};

enum class LevelMode {
  kFree,          // each piece takes its L1-optimal level (weighted median)
  kLeftEndpoint,  // each piece takes the curve value at its first position
};

struct PiecewiseFit {
  std::vector<int> starts;     // 1-based first position of each piece, increasing
  std::vector<double> levels;  // one per piece
  double error = 0.0;          // sum_x |f(x) - h(x)|, recomputed from the pieces

  int pieces() const noexcept { return static_cast<int>(starts.size()); }
  /// The fitted step function h(1)..h(n).
  std::vector<double> evaluate(int n) const;
};

/// Exact minimizer of the L1 error over step functions with at most k pieces.
/// Ties go to the lexicographically smallest start vector; in free mode the
/// search runs over maximal runs of equal values and the level is the
/// smallest value whose cumulative weight reaches half the piece weight.
PiecewiseFit best_k_piecewise(const DiscreteCurve& f, int k,
                              LevelMode mode = LevelMode::kFree);

/// Number of maximal runs of equal consecutive values.
int count_runs(const DiscreteCurve& f);

struct HardBlock {
  int index = 0;     // i
  int first = 0;     // floor((1+eps)^i)
  int last = 0;      // min(floor((1+eps)^(i+1)) - 1, n); last < first when empty
  double value = 0;  // (1/4) (1+eps)^-i / ln n
};

struct HardCurve {
  DiscreteCurve curve{std::vector<double>{0.0}};
  std::vector<HardBlock> blocks;  // i = 0..m, including empty blocks
  bool in_lemma_range = true;     // (2/n) ln(2/eps) <= eps <= 1/ln n
};

/// Block-constant curve with geometrically growing blocks and geometrically
/// shrinking values. Outside the lemma's (n, eps) window the curve is still
/// built and `in_lemma_range` is false. Requires n >= 2 and 0 < eps.
HardCurve hard_curve(int n, double eps);

struct LowerBoundRow {
  int n = 0;
  double eps = 0.0;
  int k = 0;
  double best_error = 0.0;
  double ratio = 0.0;  // best_error / eps
  bool in_lemma_range = true;
};

/// For each n: eps (or 1/ln n when eps <= 0), k = max(1, floor(c ln n / eps)),
/// then the best free-level fit of hard_curve(n, eps) with k pieces.
std::vector<LowerBoundRow> lower_bound_experiment(const std::vector<int>& n_grid, double eps,
                                                  double c);

}  // namespace unmask
