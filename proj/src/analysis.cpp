#include "hmflab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace hmf {

FitResult ols(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw UsageError("ols: x and y differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientDataError("fit needs at least 2 points, got " + std::to_string(n));
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InsufficientDataError("fit needs at least 2 distinct abscissae");
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ssr += r * r;
  }
  f.residual_rms = std::sqrt(ssr / static_cast<double>(n));
  // a perfectly flat line is a perfect fit
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  f.points_used = static_cast<int>(n);
  return f;
}

std::vector<DistancePoint> family_points(const CoefficientTable& table, const PauliString& pattern) {
  std::vector<DistancePoint> out;
  for (const auto& member : family_members(pattern, table.n_sites_a)) {
    const auto& e = table.at(member);
    out.push_back({distance(member, table.n_sites_a), e.value, e.below_floor});
  }
  return out;
}

FitResult fit_skin_depth(const std::vector<DistancePoint>& points) {
  std::vector<double> x;
  std::vector<double> y;
  int excluded = 0;
  for (const auto& p : points) {
    if (p.below_floor || p.value == 0.0) {
      ++excluded;
      continue;
    }
    x.push_back(p.distance);
    y.push_back(std::log(std::abs(p.value)));
  }
  if (x.size() < 2) {
    throw InsufficientDataError("skin depth fit: " + std::to_string(x.size()) + " usable point(s), " +
                                std::to_string(excluded) + " below floor");
  }
  FitResult f = ols(x, y);
  f.excluded_below_floor = excluded;
  return f;
}

FitResult fit_skin_depth(const CoefficientTable& table, const PauliString& pattern) {
  return fit_skin_depth(family_points(table, pattern));
}

double skin_depth(const FitResult& fit) { return -1.0 / fit.slope; }

FitResult fit_skin_law(const std::vector<std::pair<double, double>>& beta_dc) {
  if (beta_dc.size() < 3) throw InsufficientDataError("skin law fit needs at least 3 beta values");
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& [beta, dc] : beta_dc) {
    if (!(beta > 0.0) || dc == 0.0) throw UsageError("skin law fit: beta and d_c must be positive");
    x.push_back(-2.0 * std::log(beta));
    y.push_back(1.0 / dc);
  }
  return ols(x, y);
}

FitResult fit_beta_exponent(const std::vector<BetaSample>& samples, double beta_lo, double beta_hi) {
  std::vector<double> x;
  std::vector<double> y;
  int excluded = 0;
  for (const auto& s : samples) {
    if (s.beta < beta_lo || s.beta > beta_hi) continue;
    if (s.below_floor || s.value == 0.0) {
      ++excluded;
      continue;
    }
    x.push_back(std::log(s.beta));
    y.push_back(std::log(std::abs(s.value)));
  }
  if (x.size() < 3) {
    throw InsufficientDataError("exponent fit: " + std::to_string(x.size()) + " usable sample(s) in window");
  }
  FitResult f = ols(x, y);
  f.excluded_below_floor = excluded;
  return f;
}

}  // namespace hmf
