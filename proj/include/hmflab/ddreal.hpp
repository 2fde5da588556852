#pragma once

// Double-double arithmetic: a real number stored as an unevaluated sum hi + lo
// with |lo| <= ulp(hi)/2, giving a 106-bit significand.  Error-free
// transformations follow Dekker/Knuth; exp/log use argument reduction plus a
// Newton correction.  Requires a hardware FMA for two_prod and the translation
// unit must not contract floating-point expressions (-ffp-contract=off).

#include <cmath>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <tuple>
#include <utility>

namespace hmf {

class DDReal {
 public:
  constexpr DDReal() = default;
  constexpr DDReal(double hi) : hi_(hi), lo_(0.0) {}  // NOLINT(implicit)
  constexpr DDReal(int v) : hi_(static_cast<double>(v)), lo_(0.0) {}  // NOLINT
  constexpr DDReal(double hi, double lo) : hi_(hi), lo_(lo) {}

  [[nodiscard]] constexpr double hi() const { return hi_; }
  [[nodiscard]] constexpr double lo() const { return lo_; }
  explicit constexpr operator double() const { return hi_ + lo_; }

  friend DDReal operator+(const DDReal& a, const DDReal& b) {
    auto [s1, s2] = two_sum(a.hi_, b.hi_);
    auto [t1, t2] = two_sum(a.lo_, b.lo_);
    s2 += t1;
    std::tie(s1, s2) = quick_two_sum(s1, s2);
    s2 += t2;
    std::tie(s1, s2) = quick_two_sum(s1, s2);
    return {s1, s2};
  }
  friend DDReal operator-(const DDReal& a) { return {-a.hi_, -a.lo_}; }
  friend DDReal operator-(const DDReal& a, const DDReal& b) { return a + (-b); }

  friend DDReal operator*(const DDReal& a, const DDReal& b) {
    auto [p1, p2] = two_prod(a.hi_, b.hi_);
    p2 += a.hi_ * b.lo_ + a.lo_ * b.hi_;
    auto [r1, r2] = quick_two_sum(p1, p2);
    return {r1, r2};
  }
  friend DDReal operator*(const DDReal& a, double b) {
    auto [p1, p2] = two_prod(a.hi_, b);
    p2 += a.lo_ * b;
    auto [r1, r2] = quick_two_sum(p1, p2);
    return {r1, r2};
  }

  friend DDReal operator/(const DDReal& a, const DDReal& b) {
    double q1 = a.hi_ / b.hi_;
    DDReal r = a - b * q1;
    double q2 = r.hi_ / b.hi_;
    r = r - b * q2;
    double q3 = r.hi_ / b.hi_;
    auto [s1, s2] = quick_two_sum(q1, q2);
    return DDReal(s1, s2) + DDReal(q3);
  }

  DDReal& operator+=(const DDReal& o) { return *this = *this + o; }
  DDReal& operator-=(const DDReal& o) { return *this = *this - o; }
  DDReal& operator*=(const DDReal& o) { return *this = *this * o; }
  DDReal& operator/=(const DDReal& o) { return *this = *this / o; }

  friend bool operator==(const DDReal& a, const DDReal& b) {
    return a.hi_ == b.hi_ && a.lo_ == b.lo_;
  }
  friend std::partial_ordering operator<=>(const DDReal& a, const DDReal& b) {
    if (auto c = a.hi_ <=> b.hi_; c != 0) return c;
    return a.lo_ <=> b.lo_;
  }

  /// Decimal rendering with `digits` significant digits (at most 32 useful).
  [[nodiscard]] std::string to_string(int digits = 32) const;
  /// Parses a decimal literal such as "-1.25e-3" (correct to ~1e-31 relative).
  static DDReal from_string(const std::string& text);

 private:
  static std::pair<double, double> two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
  }
  static std::pair<double, double> quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
  }
  static std::pair<double, double> two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
  }

  double hi_ = 0.0;
  double lo_ = 0.0;
};

inline DDReal abs(const DDReal& a) { return a.hi() < 0.0 ? -a : a; }
inline DDReal ldexp(const DDReal& a, int e) {
  return {std::ldexp(a.hi(), e), std::ldexp(a.lo(), e)};
}
DDReal sqrt(const DDReal& a);
DDReal exp(const DDReal& a);
DDReal log(const DDReal& a);
inline bool isfinite(const DDReal& a) { return std::isfinite(a.hi()); }

std::ostream& operator<<(std::ostream& os, const DDReal& x);

}  // namespace hmf
