#include "hmflab/ddreal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace hmf {
namespace {

const DDReal kLn2(6.931471805599452862e-01, 2.319046813846299558e-17);

DDReal pow10(int e) {
  DDReal r(1.0);
  DDReal base = e < 0 ? DDReal(1.0) / DDReal(10.0) : DDReal(10.0);
  unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
  while (n != 0) {
    if (n & 1U) r *= base;
    base *= base;
    n >>= 1U;
  }
  return r;
}

}  // namespace

DDReal sqrt(const DDReal& a) {
  if (a.hi() == 0.0) return DDReal(0.0);
  if (a.hi() < 0.0) return DDReal(std::numeric_limits<double>::quiet_NaN());
  double x = 1.0 / std::sqrt(a.hi());
  double ax = a.hi() * x;
  DDReal ax2 = DDReal(ax) * DDReal(ax);
  return DDReal(ax) + DDReal((a - ax2).hi() * (x * 0.5));
}

DDReal exp(const DDReal& a) {
  if (a.hi() > 709.0) return DDReal(std::numeric_limits<double>::infinity());
  if (a.hi() < -745.0) return DDReal(0.0);
  if (a.hi() == 0.0 && a.lo() == 0.0) return DDReal(1.0);

  const double k = std::nearbyint(a.hi() / kLn2.hi());
  DDReal r = a - kLn2 * k;
  // expm1 on r / 2^10 by Taylor series, then undo the scaling with
  // expm1(2x) = 2 expm1(x) + expm1(x)^2.
  r = ldexp(r, -10);
  DDReal term = r;
  DDReal s = r;
  for (int n = 2; n <= 12; ++n) {
    term = term * r / DDReal(static_cast<double>(n));
    s += term;
    if (std::abs(term.hi()) < 1e-36 * std::abs(s.hi())) break;
  }
  for (int i = 0; i < 10; ++i) s = ldexp(s, 1) + s * s;
  return ldexp(s + DDReal(1.0), static_cast<int>(k));
}

DDReal log(const DDReal& a) {
  if (a.hi() <= 0.0) {
    return DDReal(a.hi() == 0.0 ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::quiet_NaN());
  }
  if (a.hi() == 1.0 && a.lo() == 0.0) return DDReal(0.0);
  DDReal x(std::log(a.hi()));
  // Newton step on exp(x) = a doubles the number of correct bits.
  x = x + a * exp(-x) - DDReal(1.0);
  return x;
}

std::string DDReal::to_string(int digits) const {
  if (!std::isfinite(hi_)) return std::to_string(hi_);
  if (hi_ == 0.0) return "0";
  digits = std::max(1, std::min(digits, 34));
  DDReal v = abs(*this);
  int e = static_cast<int>(std::floor(std::log10(v.hi())));
  v = v * pow10(-e);
  if (v.hi() >= 10.0) {
    v = v / DDReal(10.0);
    ++e;
  } else if (v.hi() < 1.0) {
    v = v * DDReal(10.0);
    --e;
  }
  std::string mant;
  for (int i = 0; i < digits + 1; ++i) {
    int d = static_cast<int>(std::floor(v.hi()));
    if (d < 0) d = 0;
    if (d > 9) d = 9;
    mant.push_back(static_cast<char>('0' + d));
    v = (v - DDReal(static_cast<double>(d))) * DDReal(10.0);
  }
  // round half up on the guard digit
  if (mant.back() >= '5') {
    int i = digits - 1;
    while (i >= 0 && mant[static_cast<std::size_t>(i)] == '9') {
      mant[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) {
      mant.insert(mant.begin(), '1');
      ++e;
    } else {
      ++mant[static_cast<std::size_t>(i)];
    }
  }
  mant.resize(static_cast<std::size_t>(digits));
  std::string out = hi_ < 0.0 ? "-" : "";
  out += mant.substr(0, 1);
  if (digits > 1) out += "." + mant.substr(1);
  out += "e" + std::to_string(e);
  return out;
}

DDReal DDReal::from_string(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  bool neg = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
  DDReal v(0.0);
  int exp10 = 0;
  bool any = false;
  bool frac = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      v = v * DDReal(10.0) + DDReal(static_cast<double>(c - '0'));
      if (frac) --exp10;
      any = true;
    } else if (c == '.' && !frac) {
      frac = true;
    } else {
      break;
    }
  }
  if (!any) throw std::invalid_argument("not a decimal number: '" + text + "'");
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::size_t used = 0;
    exp10 += std::stoi(text.substr(i), &used);
    i += used;
  }
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i != text.size()) throw std::invalid_argument("trailing characters in '" + text + "'");
  if (exp10 != 0) v = exp10 > 0 ? v * pow10(exp10) : v / pow10(-exp10);
  return neg ? -v : v;
}

std::ostream& operator<<(std::ostream& os, const DDReal& x) {
  return os << x.to_string(static_cast<int>(os.precision()) > 0
                               ? static_cast<int>(os.precision())
                               : 32);
}

}  // namespace hmf
