#pragma once

// Straight-line fits in log space: skin depth, skin-depth law, and small-beta
// power-law exponents.

#include <utility>
#include <vector>

#include "hmflab/hmf_core.hpp"

namespace hmf {

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points_used = 0;
  int excluded_below_floor = 0;
  double residual_rms = 0.0;
};

/// Ordinary least squares y = slope*x + intercept.  Needs >= 2 distinct x.
FitResult ols(const std::vector<double>& x, const std::vector<double>& y);

struct DistancePoint {
  int distance = 0;
  double value = 0.0;
  bool below_floor = false;
};

/// Members of the translation family of `pattern` found in the table.
std::vector<DistancePoint> family_points(const CoefficientTable& table, const PauliString& pattern);

/// ln|c| against d over above-floor points; d_c = -1/slope.
FitResult fit_skin_depth(const std::vector<DistancePoint>& points);
FitResult fit_skin_depth(const CoefficientTable& table, const PauliString& pattern);
double skin_depth(const FitResult& fit);

/// 1/d_c against -2 ln beta; intercept is a, slope ideally 1.  Needs >= 3 points.
FitResult fit_skin_law(const std::vector<std::pair<double, double>>& beta_dc);

struct BetaSample {
  double beta = 0.0;
  double value = 0.0;
  bool below_floor = false;
};

/// ln|c| against ln beta inside [beta_lo, beta_hi]; needs >= 3 usable samples.
FitResult fit_beta_exponent(const std::vector<BetaSample>& samples, double beta_lo = 1e-3, double beta_hi = 1e-2);

}  // namespace hmf
