#pragma once

// Scalar types used at the three supported precision classes and the small
// set of traits the linear algebra needs from them:
//   P <= 53   -> double
//   P <= 106  -> DDReal (double-double)
//   P  > 106  -> MPFR through boost::multiprecision, P bits of mantissa
// Generic code calls exp/log/sqrt/abs unqualified after `using std::...` so
// that argument-dependent lookup picks the right overload.

#include <boost/multiprecision/mpfr.hpp>
#include <cmath>
#include <concepts>
#include <string>

#include "hmflab/ddreal.hpp"

namespace hmf {

using Mpfr = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

template <class T>
concept ExtendedReal =
    std::same_as<T, double> || std::same_as<T, DDReal> || std::same_as<T, Mpfr>;

namespace num {

/// Mantissa bits carried by values of type T created now.
template <ExtendedReal T>
int precision_bits() {
  if constexpr (std::same_as<T, double>) {
    return 53;
  } else if constexpr (std::same_as<T, DDReal>) {
    return 106;
  } else {
    Mpfr probe(0);
    return static_cast<int>(mpfr_get_prec(probe.backend().data()));
  }
}

template <ExtendedReal T>
const char* type_name() {
  if constexpr (std::same_as<T, double>) {
    return "binary64";
  } else if constexpr (std::same_as<T, DDReal>) {
    return "double-double";
  } else {
    return "mpfr";
  }
}

/// Exact power of two 2^e (|e| < 1000).
template <ExtendedReal T>
T pow2(int e) {
  if constexpr (std::same_as<T, double>) {
    return std::ldexp(1.0, e);
  } else if constexpr (std::same_as<T, DDReal>) {
    return DDReal(std::ldexp(1.0, e));
  } else {
    Mpfr r(1);
    mpfr_mul_2si(r.backend().data(), r.backend().data(), e, MPFR_RNDN);
    return r;
  }
}

/// 2^(-P + shift) for the working precision of T.
template <ExtendedReal T>
T tolerance(int shift) {
  return pow2<T>(-precision_bits<T>() + shift);
}

template <ExtendedReal T>
double to_double(const T& x) {
  return static_cast<double>(x);
}

/// Lossless text encoding of a scalar (hex floats); inverse of from_hex.
std::string to_hex(double x);
std::string to_hex(const DDReal& x);
std::string to_hex(const Mpfr& x);

template <ExtendedReal T>
T from_hex(const std::string& text);
template <>
double from_hex<double>(const std::string& text);
template <>
DDReal from_hex<DDReal>(const std::string& text);
template <>
Mpfr from_hex<Mpfr>(const std::string& text);

/// Parses a decimal literal at the full precision of T.
template <ExtendedReal T>
T from_decimal(const std::string& text);
template <>
double from_decimal<double>(const std::string& text);
template <>
DDReal from_decimal<DDReal>(const std::string& text);
template <>
Mpfr from_decimal<Mpfr>(const std::string& text);

/// Smallest boost digits10 setting whose MPFR mantissa holds `bits` bits.
unsigned digits10_for_bits(int bits);

/// Sets the process-wide MPFR default precision while alive.  Values created
/// in that window carry at least `bits` mantissa bits.
class MpfrPrecisionScope {
 public:
  explicit MpfrPrecisionScope(int bits);
  ~MpfrPrecisionScope();
  MpfrPrecisionScope(const MpfrPrecisionScope&) = delete;
  MpfrPrecisionScope& operator=(const MpfrPrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

}  // namespace num

/// Effective precision that a requested bit count maps to.
int effective_precision(int requested_bits);

/// Invokes `f.template operator()<T>()` with the scalar type selected by the
/// requested precision.  For MPFR the thread's precision is set for the
/// duration of the call.
template <class F>
decltype(auto) with_precision(int bits, F&& f) {
  if (bits <= 53) return f.template operator()<double>();
  if (bits <= 106) return f.template operator()<DDReal>();
  num::MpfrPrecisionScope scope(bits);
  return f.template operator()<Mpfr>();
}

}  // namespace hmf
