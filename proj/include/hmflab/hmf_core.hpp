#pragma once

// Exact Hamiltonian of mean force of the first L_A sites, its Pauli
// deviation table, and the ground-state entanglement Hamiltonian.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "hmflab/eigen.hpp"
#include "hmflab/model.hpp"
#include "hmflab/pauli_matrix.hpp"

namespace hmf {

template <ExtendedReal T>
struct HmfResult {
  double beta = 0.0;
  DenseOperator<T> hmf;  // on the A register
  T log_zstar{0};        // ln Z - ln Z_B
  int n_sites = 0;
  int n_sites_a = 0;
};

struct CoefficientEntry {
  PauliString op;
  double value = 0.0;
  bool below_floor = false;
};

struct CoefficientTable {
  double beta = 0.0;
  int order = -1;  // series order k for perturbative tables, -1 for exact ones
  double floor = 0.0;
  int n_sites_a = 0;
  std::vector<CoefficientEntry> entries;

  [[nodiscard]] const CoefficientEntry& at(const PauliString& op) const;
};

/// 2^(-P+30) * max(1, norm)
template <ExtendedReal T>
double numerical_floor(double norm) {
  return num::to_double(num::tolerance<T>(30)) * std::max(1.0, norm);
}

template <ExtendedReal T>
CoefficientTable make_table(double beta, double floor, int n_sites_a, const DenseOperator<T>& x,
                            const std::vector<PauliString>& ops) {
  CoefficientTable t;
  t.beta = beta;
  t.floor = floor;
  t.n_sites_a = n_sites_a;
  const auto values = pauli_coefficients(x, ops);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const double v = num::to_double(values[i]);
    t.entries.push_back({ops[i], v, std::abs(v) < floor});
  }
  return t;
}

inline void require_ops_in_a(const std::vector<PauliString>& ops, int n_sites_a) {
  for (const auto& o : ops) {
    if (o.chain_length() != n_sites_a || (!o.is_identity() && o.max_site() > n_sites_a)) {
      throw UsageError("operator " + o.to_string() + " is not on the A register of " +
                       std::to_string(n_sites_a) + " sites");
    }
  }
}

/// Diagonalizes H once; thermal quantities at any beta reuse the spectrum.
template <ExtendedReal T>
class ThermalEngine {
 public:
  explicit ThermalEngine(const Bipartition& bip)
      : bip_(bip),
        spectrum_(hermitian_eigen(dense_total<T>(bip))),
        h_a_(dense<T>(restrict_to_a(bip.h_a, bip.n_sites_a))) {
    const ModelSpec hb = shift_to_b(bip.h_b, bip.n_sites_a);
    if (hb.terms.empty()) {
      bath_energies_.assign(bip.dim_b(), T(0));
    } else {
      bath_energies_ = hermitian_eigen(dense<T>(hb)).eigenvalues;
    }
    using std::abs;
    T norm(0);
    for (const auto& e : spectrum_.eigenvalues) norm = std::max(norm, T(abs(e)));
    spectral_norm_ = num::to_double(norm);
  }

  [[nodiscard]] const Bipartition& bipartition() const { return bip_; }
  [[nodiscard]] const SpectralDecomposition<T>& spectrum() const { return spectrum_; }
  [[nodiscard]] const DenseOperator<T>& h_a() const { return h_a_; }
  [[nodiscard]] double spectral_norm() const { return spectral_norm_; }
  [[nodiscard]] double floor() const { return numerical_floor<T>(spectral_norm_); }

  /// tr_B( sum_i w_i |v_i><v_i| ) on the A register.
  [[nodiscard]] DenseOperator<T> reduced(const std::vector<T>& weights) const {
    const std::size_t dim_b = bip_.dim_b();
    const std::size_t dim_a = std::size_t{1} << bip_.n_sites_a;
    const std::size_t n = weights.size();
    const auto& v = spectrum_.eigenvectors;
    DenseOperator<T> r(dim_a);
    if (v.is_real()) {
      std::vector<T> acc(dim_a * dim_a, T(0));
      for (std::size_t i = 0; i < n; ++i) {
        if (weights[i] == T(0)) continue;
        for (std::size_t b = 0; b < dim_b; ++b) {
          for (std::size_t a = 0; a < dim_a; ++a) {
            const T wa = weights[i] * v(a * dim_b + b, i).re;
            if (wa == T(0)) continue;
            T* row = &acc[a * dim_a];
            for (std::size_t ap = 0; ap < dim_a; ++ap) row[ap] += wa * v(ap * dim_b + b, i).re;
          }
        }
      }
      for (std::size_t k = 0; k < acc.size(); ++k) r.entries()[k].re = acc[k];
      return r;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] == T(0)) continue;
      for (std::size_t b = 0; b < dim_b; ++b) {
        for (std::size_t a = 0; a < dim_a; ++a) {
          const Complex<T> va = v(a * dim_b + b, i) * weights[i];
          for (std::size_t ap = 0; ap < dim_a; ++ap) r(a, ap) += va * conj(v(ap * dim_b + b, i));
        }
      }
    }
    return r;
  }

  /// H*_A(beta) = -(1/beta) [ln rho_s - ln z_B] + E0 - E0_B, where rho_s is
  /// tr_B e^{-beta (H - E0)} and z_B = tr e^{-beta (H_B - E0_B)}.
  [[nodiscard]] HmfResult<T> compute(double beta) const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw UsageError("compute_hmf: beta must be positive and finite, got " + std::to_string(beta));
    }
    using std::exp;
    using std::log;
    const T b(beta);
    const T e0 = spectrum_.eigenvalues.front();
    std::vector<T> w;
    w.reserve(spectrum_.eigenvalues.size());
    for (const auto& e : spectrum_.eigenvalues) w.push_back(exp(-b * (e - e0)));
    const DenseOperator<T> rho_s = reduced(w);

    const T eb0 = bath_energies_.front();
    T z_b(0);
    for (const auto& e : bath_energies_) z_b += exp(-b * (e - eb0));
    const T ln_zb = log(z_b);

    const auto sd = hermitian_eigen(rho_s);
    DenseOperator<T> log_rho = apply_function(sd, Log{});
    HmfResult<T> r;
    r.beta = beta;
    r.n_sites = bip_.n_sites;
    r.n_sites_a = bip_.n_sites_a;
    const T inv_beta = T(1) / b;
    const T shift = ln_zb * inv_beta + e0 - eb0;
    r.hmf = log_rho * (-inv_beta);
    for (std::size_t i = 0; i < r.hmf.dim(); ++i) r.hmf(i, i).re += shift;
    r.hmf.hermitize();
    T tr(0);
    for (const auto& x : sd.eigenvalues) tr += x;
    r.log_zstar = (log(tr) - b * e0) - (ln_zb - b * eb0);
    return r;
  }

  /// Thermal reduced state rho_A = tr_B e^{-beta H} / Z.
  [[nodiscard]] DenseOperator<T> reduced_thermal_state(double beta) const {
    using std::exp;
    const T b(beta);
    const T e0 = spectrum_.eigenvalues.front();
    std::vector<T> w;
    T z(0);
    for (const auto& e : spectrum_.eigenvalues) {
      w.push_back(exp(-b * (e - e0)));
      z += w.back();
    }
    auto r = reduced(w);
    r *= T(1) / z;
    return r;
  }

 private:
  Bipartition bip_;
  SpectralDecomposition<T> spectrum_;
  DenseOperator<T> h_a_;
  std::vector<T> bath_energies_;
  double spectral_norm_ = 0.0;
};

template <ExtendedReal T>
HmfResult<T> compute_hmf(const Bipartition& bip, double beta) {
  return ThermalEngine<T>(bip).compute(beta);
}

/// c(O) = coefficient of O in hmf - H_A, with the below-floor flag.
template <ExtendedReal T>
CoefficientTable deviation_table(const HmfResult<T>& res, const DenseOperator<T>& h_a,
                                 const std::vector<PauliString>& ops, double floor) {
  require_ops_in_a(ops, res.n_sites_a);
  return make_table(res.beta, floor, res.n_sites_a, res.hmf - h_a, ops);
}

template <ExtendedReal T>
CoefficientTable deviation_table(const ThermalEngine<T>& engine, const HmfResult<T>& res,
                                 const std::vector<PauliString>& ops) {
  return deviation_table(res, engine.h_a(), ops, engine.floor());
}

// ---------------------------------------------------------------------------
// Ground state limit

template <ExtendedReal T>
struct EntanglementResult {
  DenseOperator<T> ent_ham;
  DenseOperator<T> reduced_gs;  // rho_A^GS before regularization
  int gs_degeneracy = 0;
  int reduced_rank = 0;
  double regularization_eps = 0.0;
  double ground_energy = 0.0;
};

/// eps: nullopt selects 0 for a full-rank reduced state and 2^(-P/2)
/// otherwise.  gap_tol is relative to the spectral range.
template <ExtendedReal T>
EntanglementResult<T> entanglement_hamiltonian(const SpectralDecomposition<T>& spectrum, int n_sites,
                                               int n_sites_a, double gap_tol = 1e-10,
                                               std::optional<double> eps = std::nullopt) {
  if (eps && *eps < 0.0) throw UsageError("entanglement_hamiltonian: eps must be >= 0");
  if (n_sites_a < 1 || n_sites_a >= n_sites) throw UsageError("entanglement_hamiltonian: bad L_A");
  using std::abs;
  const auto& ev = spectrum.eigenvalues;
  const T range = ev.back() - ev.front();
  const T tol = T(gap_tol) * range;
  std::size_t g = 0;
  while (g < ev.size() && ev[g] - ev.front() <= tol) ++g;

  const std::size_t dim_b = std::size_t{1} << (n_sites - n_sites_a);
  const std::size_t dim_a = std::size_t{1} << n_sites_a;
  DenseOperator<T> rho(dim_a);
  const auto& v = spectrum.eigenvectors;
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t b = 0; b < dim_b; ++b) {
      for (std::size_t a = 0; a < dim_a; ++a) {
        const Complex<T> va = v(a * dim_b + b, i);
        for (std::size_t ap = 0; ap < dim_a; ++ap) rho(a, ap) += va * conj(v(ap * dim_b + b, i));
      }
    }
  }
  rho *= T(1) / T(static_cast<double>(g));

  EntanglementResult<T> out;
  out.reduced_gs = rho;
  out.gs_degeneracy = static_cast<int>(g);
  out.ground_energy = num::to_double(ev.front());
  const auto sd = hermitian_eigen(rho);
  T largest(0);
  for (const auto& x : sd.eigenvalues) largest = std::max(largest, T(abs(x)));
  const T rank_tol = T(static_cast<double>(dim_a)) * num::tolerance<T>(16) * largest;
  int rank = 0;
  for (const auto& x : sd.eigenvalues) rank += x > rank_tol ? 1 : 0;
  out.reduced_rank = rank;

  double e = 0.0;
  if (eps) {
    e = *eps;
  } else if (rank < static_cast<int>(dim_a)) {
    e = std::ldexp(1.0, -num::precision_bits<T>() / 2);
  }
  if (e == 0.0 && rank < static_cast<int>(dim_a)) {
    throw DomainError("entanglement_hamiltonian: reduced ground state has rank " + std::to_string(rank) +
                          " < " + std::to_string(dim_a) + "; pass eps > 0 to regularize",
                      num::to_double(sd.eigenvalues.front()));
  }
  out.regularization_eps = e;
  std::vector<T> vals;
  using std::log;
  for (const auto& x : sd.eigenvalues) {
    const T y = x + T(e);
    if (!(y > T(0))) {
      throw DomainError("entanglement_hamiltonian: regularized state is not positive",
                        num::to_double(y));
    }
    vals.push_back(-log(y));
  }
  out.ent_ham = spectral_synthesis<T>(sd.eigenvectors, vals);
  return out;
}

template <ExtendedReal T>
EntanglementResult<T> entanglement_hamiltonian(const ModelSpec& spec, int n_sites_a, double gap_tol = 1e-10,
                                               std::optional<double> eps = std::nullopt) {
  return entanglement_hamiltonian(hermitian_eigen(dense<T>(spec)), spec.n_sites, n_sites_a, gap_tol, eps);
}

/// || beta*hmf + ln Z* - ent_ham ||_F / 2^(L_A/2)
template <ExtendedReal T>
double rescaled_distance(const HmfResult<T>& res, const EntanglementResult<T>& ent) {
  if (res.hmf.dim() != ent.ent_ham.dim()) throw UsageError("rescaled_distance: L_A mismatch");
  auto d = res.hmf * T(res.beta);
  for (std::size_t i = 0; i < d.dim(); ++i) d(i, i).re += res.log_zstar;
  d -= ent.ent_ham;
  using std::sqrt;
  return num::to_double(d.frobenius_norm() / sqrt(T(static_cast<double>(d.dim()))));
}

}  // namespace hmf
