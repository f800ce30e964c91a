#include "unmask/stepfit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "unmask/error.hpp"

namespace unmask {

DiscreteCurve::DiscreteCurve(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) fail(ErrorCode::kInvalidArgument, "curve has no values");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x))
      fail(ErrorCode::kInvalidArgument, "curve values must be finite and non-negative");
}

std::vector<double> PiecewiseFit::evaluate(int n) const {
  std::vector<double> h(n, 0.0);
  for (std::size_t p = 0; p < starts.size(); ++p) {
    const int end = p + 1 < starts.size() ? starts[p + 1] : n + 1;
    for (int x = starts[p]; x < end; ++x) h[x - 1] = levels[p];
  }
  return h;
}

int count_runs(const DiscreteCurve& f) {
  int runs = 1;
  for (int x = 2; x <= f.n(); ++x)
    if (f[x] != f[x - 1]) ++runs;
  return runs;
}

namespace {

// A maximal run of equal values (free mode) or a single position.
struct Unit {
  double value;
  std::int64_t weight;
  int start;  // 1-based
};

std::vector<Unit> make_units(const DiscreteCurve& f, LevelMode mode) {
  std::vector<Unit> units;
  for (int x = 1; x <= f.n(); ++x) {
    if (mode == LevelMode::kFree && !units.empty() && units.back().value == f[x])
      ++units.back().weight;
    else
      units.push_back({f[x], 1, x});
  }
  return units;
}

// Fenwick trees of weight and weight*value indexed by value rank, for
// incremental weighted medians.
class MedianTree {
 public:
  explicit MedianTree(std::vector<double> sorted_values)
      : values_(std::move(sorted_values)), weight_(values_.size() + 1, 0),
        mass_(values_.size() + 1, 0.0) {}

  void clear() {
    std::fill(weight_.begin(), weight_.end(), 0);
    std::fill(mass_.begin(), mass_.end(), 0.0);
    total_weight_ = 0;
    total_mass_ = 0.0;
  }

  void insert(double value, std::int64_t w) {
    const auto rank = std::lower_bound(values_.begin(), values_.end(), value) - values_.begin();
    for (std::size_t i = rank + 1; i < weight_.size(); i += i & (~i + 1)) {
      weight_[i] += w;
      mass_[i] += static_cast<double>(w) * value;
    }
    total_weight_ += w;
    total_mass_ += static_cast<double>(w) * value;
  }

  // Smallest value whose cumulative weight reaches half the total.
  double median() const {
    std::size_t pos = 0;
    std::int64_t below = 0;
    std::size_t step = std::bit_floor(values_.size());
    for (; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next < weight_.size() && 2 * (below + weight_[next]) < total_weight_) {
        pos = next;
        below += weight_[next];
      }
    }
    return values_[pos];  // rank pos is 0-based index of the median value
  }

  double cost() const {
    const double med = median();
    const auto rank = std::upper_bound(values_.begin(), values_.end(), med) - values_.begin();
    std::int64_t w = 0;
    double s = 0.0;
    for (std::size_t i = rank; i > 0; i -= i & (~i + 1)) {
      w += weight_[i];
      s += mass_[i];
    }
    const double low = med * static_cast<double>(w) - s;
    const double high = (total_mass_ - s) - med * static_cast<double>(total_weight_ - w);
    return std::max(0.0, low) + std::max(0.0, high);
  }

 private:
  std::vector<double> values_;
  std::vector<std::int64_t> weight_;
  std::vector<double> mass_;
  std::int64_t total_weight_ = 0;
  double total_mass_ = 0.0;
};

class SegmentCosts {
 public:
  SegmentCosts(const std::vector<Unit>& units, LevelMode mode)
      : units_(units), mode_(mode), tree_([&] {
          std::vector<double> v;
          for (const auto& u : units) v.push_back(u.value);
          std::sort(v.begin(), v.end());
          v.erase(std::unique(v.begin(), v.end()), v.end());
          return v;
        }()) {}

  // row[b] = cost of units [a, b) for b in (a, U]; row[a] unused.
  std::vector<double> row(std::size_t a) {
    const std::size_t u = units_.size();
    std::vector<double> out(u + 1, 0.0);
    if (mode_ == LevelMode::kFree) {
      tree_.clear();
      for (std::size_t b = a + 1; b <= u; ++b) {
        tree_.insert(units_[b - 1].value, units_[b - 1].weight);
        out[b] = tree_.cost();
      }
    } else {
      double cost = 0.0;
      for (std::size_t b = a + 1; b <= u; ++b) {
        cost += static_cast<double>(units_[b - 1].weight) *
                std::abs(units_[b - 1].value - units_[a].value);
        out[b] = cost;
      }
    }
    return out;
  }

  double level(std::size_t a, std::size_t b) {
    if (mode_ == LevelMode::kLeftEndpoint) return units_[a].value;
    tree_.clear();
    for (std::size_t i = a; i < b; ++i) tree_.insert(units_[i].value, units_[i].weight);
    return tree_.median();
  }

 private:
  const std::vector<Unit>& units_;
  LevelMode mode_;
  MedianTree tree_;
};

}  // namespace

PiecewiseFit best_k_piecewise(const DiscreteCurve& f, int k, LevelMode mode) {
  if (k < 1) fail(ErrorCode::kInvalidArgument, "k must be >= 1");
  const std::vector<Unit> units = make_units(f, mode);
  const std::size_t u = units.size();
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), u);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  SegmentCosts costs(units, mode);

  // best[m][a]: least error of units [a, u) with at most m pieces.
  std::vector<std::vector<double>> best(kk + 1, std::vector<double>(u + 1, kInf));
  for (std::size_t m = 1; m <= kk; ++m) best[m][u] = 0.0;
  for (std::size_t a = u; a-- > 0;) {
    const auto row = costs.row(a);
    best[1][a] = row[u];
    for (std::size_t m = 2; m <= kk; ++m) {
      double value = row[u];
      for (std::size_t b = a + 1; b < u; ++b) value = std::min(value, row[b] + best[m - 1][b]);
      best[m][a] = value;
    }
  }

  PiecewiseFit fit;
  std::size_t a = 0;
  for (std::size_t m = kk; a < u; --m) {
    const double target = best[m][a];
    const double slack = 1e-12 * (1.0 + std::abs(target));
    const auto row = costs.row(a);
    std::size_t chosen = u;
    if (m > 1) {
      for (std::size_t b = a + 1; b < u; ++b) {
        if (row[b] + best[m - 1][b] <= target + slack) {
          chosen = b;
          break;
        }
      }
    }
    fit.starts.push_back(units[a].start);
    fit.levels.push_back(costs.level(a, chosen));
    a = chosen;
  }

  const auto h = fit.evaluate(f.n());
  for (int x = 1; x <= f.n(); ++x) fit.error += std::abs(f[x] - h[x - 1]);
  return fit;
}

HardCurve hard_curve(int n, double eps) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "hard curve needs n >= 2");
  if (!(eps > 0.0) || !std::isfinite(eps))
    fail(ErrorCode::kInvalidTolerance, "eps must be a positive finite number");
  const double ln_n = std::log(static_cast<double>(n));
  const double growth = 1.0 + eps;
  const int m = static_cast<int>(
      std::ceil(std::log(static_cast<double>(n) + 1.0) / std::log(growth) - 1.0));

  HardCurve out;
  out.in_lemma_range = (2.0 / n) * std::log(2.0 / eps) <= eps && eps <= 1.0 / ln_n;
  std::vector<double> values(n, 0.0);
  for (int i = 0; i <= m; ++i) {
    HardBlock block;
    block.index = i;
    block.first = static_cast<int>(std::floor(std::pow(growth, i)));
    block.last = std::min(static_cast<int>(std::floor(std::pow(growth, i + 1))) - 1, n);
    block.value = 0.25 * std::pow(growth, -i) / ln_n;
    for (int x = block.first; x <= block.last; ++x) values[x - 1] = block.value;
    out.blocks.push_back(block);
  }
  out.curve = DiscreteCurve(std::move(values));
  return out;
}

std::vector<LowerBoundRow> lower_bound_experiment(const std::vector<int>& n_grid, double eps,
                                                  double c) {
  if (n_grid.empty()) fail(ErrorCode::kInvalidArgument, "empty n grid");
  if (!(c > 0.0)) fail(ErrorCode::kInvalidArgument, "c must be positive");
  std::vector<LowerBoundRow> rows;
  for (int n : n_grid) {
    LowerBoundRow row;
    row.n = n;
    row.eps = eps > 0.0 ? eps : 1.0 / std::log(static_cast<double>(n));
    row.k = std::max(1, static_cast<int>(std::floor(c * std::log(static_cast<double>(n)) / row.eps)));
    const HardCurve hard = hard_curve(n, row.eps);
    row.best_error = best_k_piecewise(hard.curve, row.k).error;
    row.ratio = row.best_error / row.eps;
    row.in_lemma_range = hard.in_lemma_range;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace unmask
