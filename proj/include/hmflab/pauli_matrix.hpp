#pragma once

// Dense realizations of Pauli strings and Hilbert-Schmidt coefficients.
// Site j of an n-site register is basis bit n-j (site 1 most significant).

#include <bit>
#include <utility>
#include <vector>

#include "hmflab/dense.hpp"
#include "hmflab/pauli.hpp"

namespace hmf {

namespace detail {

struct BasisMasks {
  std::size_t flip = 0;   // bits toggled by X and Y
  std::size_t phase = 0;  // bits picking up a sign from Z and Y
  int y_count = 0;
};

inline BasisMasks basis_masks(const PauliString& op, int n_sites) {
  if (!op.is_identity() && op.max_site() > n_sites) {
    throw UsageError("Pauli string " + op.to_string() + " has support outside 1.." +
                     std::to_string(n_sites));
  }
  BasisMasks m;
  for (const auto& f : op.factors()) {
    const std::size_t bit = std::size_t{1} << (n_sites - f.site);
    if (f.axis != Axis::z) m.flip |= bit;
    if (f.axis != Axis::x) m.phase |= bit;
  }
  m.y_count = op.y_count();
  return m;
}

// i^q as (re, im) with q taken mod 4
inline std::pair<int, int> i_power(int q) {
  static constexpr std::pair<int, int> kTable[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return kTable[((q % 4) + 4) % 4];
}

}  // namespace detail

/// O|b> = i^{#Y} (-1)^{popcount(b & phase)} |b ^ flip>
template <ExtendedReal T>
DenseOperator<T> to_matrix(const PauliString& op, int n_sites) {
  if (n_sites < 0 || n_sites > 20) throw UsageError("to_matrix: n_sites out of range");
  const auto m = detail::basis_masks(op, n_sites);
  const std::size_t dim = std::size_t{1} << n_sites;
  DenseOperator<T> r(dim);
  const auto [pre, pim] = detail::i_power(m.y_count);
  for (std::size_t b = 0; b < dim; ++b) {
    const int sign = (std::popcount(b & m.phase) & 1) != 0 ? -1 : 1;
    r(b ^ m.flip, b) = Complex<T>(T(sign * pre), T(sign * pim));
  }
  return r;
}

/// tr(O X) / dim without a Hermiticity check; returns the real part.
template <ExtendedReal T>
T pauli_coefficient_unchecked(const DenseOperator<T>& x, const PauliString& op) {
  int n_sites = 0;
  while ((std::size_t{1} << n_sites) < x.dim()) ++n_sites;
  if ((std::size_t{1} << n_sites) != x.dim()) throw UsageError("pauli_coefficient: dim is not a power of 2");
  const auto m = detail::basis_masks(op, n_sites);
  // tr(O X) = i^{#Y} sum_r (-1)^{pc(r & phase)} X(r, r ^ flip)
  Complex<T> s;
  for (std::size_t r = 0; r < x.dim(); ++r) {
    const Complex<T>& e = x(r, r ^ m.flip);
    if ((std::popcount(r & m.phase) & 1) != 0) {
      s -= e;
    } else {
      s += e;
    }
  }
  const auto [pre, pim] = detail::i_power(m.y_count);
  const T re = pre != 0 ? T(pre) * s.re : T(-pim) * s.im;
  return re / T(static_cast<double>(x.dim()));
}

/// Coefficient of O in the Pauli expansion of a Hermitian X.
template <ExtendedReal T>
T pauli_coefficient(const DenseOperator<T>& x, const PauliString& op) {
  const T defect = x.hermiticity_defect();
  const T scale = x.frobenius_norm();
  if (defect > num::tolerance<T>(8) * (scale > T(1) ? scale : T(1))) {
    throw NumericalError("pauli_coefficient: operator is not Hermitian (defect " +
                         std::to_string(num::to_double(defect)) + ")");
  }
  return pauli_coefficient_unchecked(x, op);
}

/// Batch form: one Hermiticity check for all operators.
template <ExtendedReal T>
std::vector<T> pauli_coefficients(const DenseOperator<T>& x, const std::vector<PauliString>& ops) {
  std::vector<T> out;
  out.reserve(ops.size());
  if (ops.empty()) return out;
  out.push_back(pauli_coefficient(x, ops.front()));
  for (std::size_t i = 1; i < ops.size(); ++i) out.push_back(pauli_coefficient_unchecked(x, ops[i]));
  return out;
}

}  // namespace hmf
