#include "hmflab/numeric.hpp"

#include <boost/multiprecision/detail/digits.hpp>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <stdexcept>

#include "hmflab/errors.hpp"

namespace hmf {
namespace num {
namespace {

double parse_hex_double(const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw UsageError("malformed hex float '" + text + "'");
  }
  return v;
}

}  // namespace

unsigned digits10_for_bits(int bits) {
  unsigned d10 = 1;
  while (boost::multiprecision::detail::digits10_2_2(d10) < static_cast<unsigned long>(bits)) {
    ++d10;
  }
  return d10;
}

std::string to_hex(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

std::string to_hex(const DDReal& x) { return to_hex(x.hi()) + ":" + to_hex(x.lo()); }

std::string to_hex(const Mpfr& x) {
  const mpfr_srcptr raw = x.backend().data();
  if (mpfr_zero_p(raw)) return mpfr_signbit(raw) ? "-0" : "0";
  mpfr_exp_t e = 0;
  char* digits = mpfr_get_str(nullptr, &e, 16, 0, raw, MPFR_RNDN);
  std::unique_ptr<char, void (*)(char*)> guard(digits, mpfr_free_str);
  std::string s(digits);
  std::string sign;
  if (!s.empty() && s.front() == '-') {
    sign = "-";
    s.erase(s.begin());
  }
  return sign + "0." + s + "@" + std::to_string(static_cast<long>(e));
}

template <>
double from_hex<double>(const std::string& text) {
  return parse_hex_double(text);
}

template <>
DDReal from_hex<DDReal>(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return DDReal(parse_hex_double(text));
  return {parse_hex_double(text.substr(0, colon)), parse_hex_double(text.substr(colon + 1))};
}

template <>
Mpfr from_hex<Mpfr>(const std::string& text) {
  Mpfr v(0);
  if (mpfr_set_str(v.backend().data(), text.c_str(), 16, MPFR_RNDN) != 0) {
    throw UsageError("malformed mpfr hex value '" + text + "'");
  }
  return v;
}

template <>
double from_decimal<double>(const std::string& text) {
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw UsageError("malformed number '" + text + "'");
  return v;
}

template <>
DDReal from_decimal<DDReal>(const std::string& text) {
  try {
    return DDReal::from_string(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

template <>
Mpfr from_decimal<Mpfr>(const std::string& text) {
  Mpfr v(0);
  if (mpfr_set_str(v.backend().data(), text.c_str(), 10, MPFR_RNDN) != 0) {
    throw UsageError("malformed number '" + text + "'");
  }
  return v;
}

MpfrPrecisionScope::MpfrPrecisionScope(int bits) : saved_digits10_(Mpfr::default_precision()) {
  Mpfr::default_precision(digits10_for_bits(bits));
}

MpfrPrecisionScope::~MpfrPrecisionScope() { Mpfr::default_precision(saved_digits10_); }

}  // namespace num

int effective_precision(int requested_bits) {
  if (requested_bits < 2) throw UsageError("precision must be at least 2 bits");
  if (requested_bits <= 53) return 53;
  if (requested_bits <= 106) return 106;
  return static_cast<int>(
      boost::multiprecision::detail::digits10_2_2(num::digits10_for_bits(requested_bits)));
}

}  // namespace hmf
