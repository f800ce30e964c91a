#pragma once

// Average entropy curve H_0..H_n, information curve Z_1..Z_n and the TC/DTC
// summaries derived from them. Everything is in bits.

#include <cstdint>
#include <vector>

#include "unmask/dist.hpp"

namespace unmask {

inline constexpr int kMaxExactCurveLength = 20;
inline constexpr double kZClampTolerance = 1e-9;
inline constexpr double kHanTolerance = 1e-6;

enum class CurveMethod { kExact, kMonteCarlo };

struct EntropyCurve {
  std::vector<double> h;       // h[i] = H_i, i = 0..n, h[0] = 0
  CurveMethod method = CurveMethod::kExact;
  std::vector<double> std_error;  // per-index standard error, empty for exact

  int n() const noexcept { return static_cast<int>(h.size()) - 1; }
};

struct InfoCurve {
  std::vector<double> z;         // z[j-1] = Z_j
  std::vector<double> z_stderr;  // empty unless estimated

  int n() const noexcept { return static_cast<int>(z.size()); }
  double operator[](int j) const { return z[j - 1]; }  // 1-based Z_j
};

struct CorrelationSummary {
  double tc = 0.0;
  double dtc = 0.0;
  double z_n = 0.0;
};

/// H_i averaged over all C(n, i) subsets. Requires n <= 20.
EntropyCurve entropy_curve_exact(const JointPMF& p);

/// Subset-sampling estimate of each H_i with one seeded stream per level.
/// With `dedup` the subsets of a level are drawn without replacement, so
/// `samples_per_level >= C(n, i)` reproduces the exact level.
EntropyCurve entropy_curve_mc(const JointPMF& p, std::size_t samples_per_level,
                              std::uint64_t seed, bool dedup = false);

enum class HanCheck { kStrict, kLenient };

/// Z_i = H_1 + H_{i-1} - H_i. Negative values above -1e-9 are clamped to 0.
/// In strict mode a Z below -1e-6 or a decrease of more than 1e-6 raises
/// HanViolation; lenient mode only clamps.
InfoCurve info_curve_from_entropy(const EntropyCurve& h,
                                  HanCheck check = HanCheck::kStrict);

/// First index j (1-based) where Han monotonicity fails by more than `tol`,
/// or 0 when the curve is monotone.
int find_han_violation(const InfoCurve& z, double tol = kHanTolerance);

/// tc = sum Z_i, dtc = n Z_n - tc.
CorrelationSummary tc_dtc_from_curve(const InfoCurve& z);

/// sum_i H(X_i) - H(X).
double tc_direct(const JointPMF& p);
/// H(X) - sum_i H(X_i | X_{-i}).
double dtc_direct(const JointPMF& p);

}  // namespace unmask
