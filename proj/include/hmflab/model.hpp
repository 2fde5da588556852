#pragma once

// XXZ chain with optional fields, and its split into H_A, H_B, H_AB.

#include <cstdint>
#include <string>
#include <vector>

#include "hmflab/dense.hpp"
#include "hmflab/pauli.hpp"
#include "hmflab/pauli_matrix.hpp"

namespace hmf {

struct Term {
  double coefficient = 0.0;
  PauliString string;
};

enum class FieldMode { uniform, disordered };

struct ModelParams {
  double J = 1.0;
  double Delta = 1.0;
  double hx = 0.0;
  double hz = 0.0;
  FieldMode field_mode = FieldMode::uniform;
  std::uint64_t seed = 0;
  std::vector<double> site_hx;  // resolved per-site fields, index j-1
  std::vector<double> site_hz;
};

/// Name and version of the disorder generator, recorded in output metadata.
inline constexpr const char* kDisorderRng = "std::mt19937_64/u53 v1";

struct ModelSpec {
  int n_sites = 0;
  std::vector<Term> terms;
  ModelParams params;
  /// Multiplies every coefficient when the spec is realized at precision T,
  /// so scaled coupling terms are rounded at T, not in double.
  double scale = 1.0;

  [[nodiscard]] std::vector<PauliString> strings() const;
};

/// Bonds j = 1..L-1 (XX, YY, ZZ), then fields j = 1..L (Z, X).  Field terms
/// with a zero coefficient are omitted.  Disordered fields draw h^z_j then
/// h^x_j for each site from mt19937_64(seed).
ModelSpec build_xxz(int n_sites, double J, double Delta, FieldMode mode, double hx, double hz,
                    std::uint64_t seed = 0);

/// Single-site fields only: sum_j (hz_j Z_j + hx_j X_j).  Used for product-state checks.
ModelSpec build_fields(int n_sites, const std::vector<double>& hx, const std::vector<double>& hz);

struct Bipartition {
  int n_sites = 0;
  int n_sites_a = 0;
  double j_ab_scale = 1.0;
  ModelSpec h_a;   // chain length L, supported on 1..L_A
  ModelSpec h_b;   // chain length L, supported on L_A+1..L
  ModelSpec h_ab;  // crossing terms; h_ab.scale = J_AB scale

  [[nodiscard]] std::size_t dim_b() const { return std::size_t{1} << (n_sites - n_sites_a); }
};

Bipartition bipartition(const ModelSpec& spec, int n_sites_a, double j_ab_scale = 1.0);

/// Same terms re-expressed on sites 1..L_A (all terms must lie in A).
ModelSpec restrict_to_a(const ModelSpec& spec, int n_sites_a);
/// Same terms translated to the B register, sites 1..L-L_A.
ModelSpec shift_to_b(const ModelSpec& spec, int n_sites_a);

/// M += coef * O on an n-site register, without forming O.
template <ExtendedReal T>
void add_pauli(DenseOperator<T>& m, const T& coef, const PauliString& op, int n_sites) {
  const auto bm = detail::basis_masks(op, n_sites);
  const auto [pre, pim] = detail::i_power(bm.y_count);
  for (std::size_t b = 0; b < m.dim(); ++b) {
    const bool neg = (std::popcount(b & bm.phase) & 1) != 0;
    const T v = neg ? -coef : coef;
    auto& e = m(b ^ bm.flip, b);
    if (pre != 0) {
      e.re += pre > 0 ? v : -v;
    } else {
      e.im += pim > 0 ? v : -v;
    }
  }
}

/// Dense matrix of the spec on its own n_sites register.
template <ExtendedReal T>
DenseOperator<T> dense(const ModelSpec& spec) {
  if (spec.n_sites < 1 || spec.n_sites > 14) throw UsageError("dense: n_sites out of range");
  DenseOperator<T> m(std::size_t{1} << spec.n_sites);
  const T scale(spec.scale);
  for (const auto& t : spec.terms) add_pauli(m, T(t.coefficient) * scale, t.string, spec.n_sites);
  return m;
}

/// H = H_A + H_B + H_AB on the full chain.
template <ExtendedReal T>
DenseOperator<T> dense_total(const Bipartition& b) {
  return dense<T>(b.h_a) + dense<T>(b.h_b) + dense<T>(b.h_ab);
}

}  // namespace hmf
