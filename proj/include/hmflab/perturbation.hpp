#pragma once

// Small-beta series H*_A = sum_k beta^k H*_{A,k}.
//
// With T_n = tr_B(H^n)/n! and t_n = tr(h_B^n)/n! (h_B on the B register),
//   H*_{A,k} = (-1)^k sum_{m=1}^{k+1} (-1)^{m+1}/(m D_B^m)
//              sum_{n_1+..+n_m = k+1} [T_{n_1}...T_{n_m} - t_{n_1}...t_{n_m} I].
// The ordered composition sum is evaluated by the recursion
//   S_1(j) = T_j,  S_m(j) = sum_i T_i S_{m-1}(j-i),
// which visits every ordered composition once.

#include <optional>
#include <vector>

#include "hmflab/hmf_core.hpp"

namespace hmf {

template <ExtendedReal T>
struct SeriesCoefficient {
  int order = 0;
  DenseOperator<T> matrix;
};

struct OrderReport {
  PauliString op;
  std::optional<int> k0_numeric;
  int k0_bound = 0;
  std::optional<int> k0_conjecture;
};

inline constexpr int kMaxSeriesOrder = 16;

template <ExtendedReal T>
class SeriesEngine {
 public:
  SeriesEngine(const Bipartition& bip, int k_max) : bip_(bip), k_max_(k_max) {
    if (k_max < 0 || k_max > kMaxSeriesOrder) {
      throw UsageError("series: k_max must be in 0.." + std::to_string(kMaxSeriesOrder));
    }
    const int la = bip.n_sites_a;
    const DenseOperator<T> h = dense_total<T>(bip);
    const DenseOperator<T> hb = dense<T>(shift_to_b(bip.h_b, la));
    DenseOperator<T> power = h;
    DenseOperator<T> power_b = hb;
    T fact(1);
    trace_powers_.push_back(DenseOperator<T>());  // index 0 unused
    bath_traces_.push_back(T(0));
    for (int n = 1; n <= k_max + 1; ++n) {
      if (n > 1) {
        power = power * h;
        power_b = power_b * hb;
      }
      fact = fact * T(n);
      auto tb = partial_trace_B(power, bip.n_sites, la);
      tb *= T(1) / fact;
      trace_powers_.push_back(std::move(tb));
      bath_traces_.push_back(power_b.trace().re / fact);
    }
  }

  [[nodiscard]] int k_max() const { return k_max_; }
  [[nodiscard]] const Bipartition& bipartition() const { return bip_; }
  /// tr_B(H^n)/n!
  [[nodiscard]] const DenseOperator<T>& trace_power(int n) const { return trace_powers_.at(static_cast<std::size_t>(n)); }

  [[nodiscard]] SeriesCoefficient<T> coefficient(int k) const {
    check_order(k);
    const std::size_t top = static_cast<std::size_t>(k + 1);
    const std::size_t dim = trace_powers_[1].dim();
    // s[m][j] for the current and previous m
    std::vector<DenseOperator<T>> prev(top + 1);
    std::vector<T> prev_b(top + 1, T(0));
    for (std::size_t j = 1; j <= top; ++j) {
      prev[j] = trace_powers_[j];
      prev_b[j] = bath_traces_[j];
    }
    const T db(static_cast<double>(bip_.dim_b()));
    DenseOperator<T> acc(dim);
    T acc_b(0);
    T db_pow = db;
    auto accumulate = [&](int m, const DenseOperator<T>& s, const T& sb) {
      T w = T(1) / (T(m) * db_pow);
      if (m % 2 == 0) w = -w;
      acc += s * w;
      acc_b += sb * w;
    };
    accumulate(1, prev[top], prev_b[top]);
    for (std::size_t m = 2; m <= top; ++m) {
      db_pow = db_pow * db;
      std::vector<DenseOperator<T>> cur(top + 1);
      std::vector<T> cur_b(top + 1, T(0));
      // S_m(j) for j in [m, top]; only j = top is needed at the last level
      const std::size_t j_lo = m == top ? top : m;
      for (std::size_t j = j_lo; j <= top; ++j) {
        DenseOperator<T> s(dim);
        T sb(0);
        for (std::size_t i = 1; i + (m - 1) <= j; ++i) {
          s += trace_powers_[i] * prev[j - i];
          sb += bath_traces_[i] * prev_b[j - i];
        }
        cur[j] = std::move(s);
        cur_b[j] = sb;
      }
      accumulate(static_cast<int>(m), cur[top], cur_b[top]);
      prev = std::move(cur);
      prev_b = std::move(cur_b);
    }
    for (std::size_t i = 0; i < dim; ++i) acc(i, i).re -= acc_b;
    if (k % 2 == 1) acc *= T(-1);
    acc.hermitize();
    return {k, std::move(acc)};
  }

  /// Same quantity by enumerating every ordered composition of k+1.
  [[nodiscard]] SeriesCoefficient<T> coefficient_by_compositions(int k) const {
    check_order(k);
    if (k > 12) throw UsageError("series: literal composition sum limited to k <= 12");
    const int top = k + 1;
    const std::size_t dim = trace_powers_[1].dim();
    const T db(static_cast<double>(bip_.dim_b()));
    DenseOperator<T> acc(dim);
    T acc_b(0);
    // compositions <-> subsets of the top-1 cut points
    for (std::uint32_t cuts = 0; cuts < (std::uint32_t{1} << (top - 1)); ++cuts) {
      std::vector<int> parts;
      int run = 1;
      for (int p = 0; p < top - 1; ++p) {
        if ((cuts >> p & 1U) != 0) {
          parts.push_back(run);
          run = 1;
        } else {
          ++run;
        }
      }
      parts.push_back(run);
      const int m = static_cast<int>(parts.size());
      DenseOperator<T> prod = trace_powers_[static_cast<std::size_t>(parts[0])];
      T prod_b = bath_traces_[static_cast<std::size_t>(parts[0])];
      for (std::size_t i = 1; i < parts.size(); ++i) {
        prod = prod * trace_powers_[static_cast<std::size_t>(parts[i])];
        prod_b = prod_b * bath_traces_[static_cast<std::size_t>(parts[i])];
      }
      T denom = T(m);
      for (int i = 0; i < m; ++i) denom = denom * db;
      T w = T(1) / denom;
      if (m % 2 == 0) w = -w;
      acc += prod * w;
      acc_b += prod_b * w;
    }
    for (std::size_t i = 0; i < dim; ++i) acc(i, i).re -= acc_b;
    if (k % 2 == 1) acc *= T(-1);
    acc.hermitize();
    return {k, std::move(acc)};
  }

 private:
  void check_order(int k) const {
    if (k < 0 || k > k_max_) {
      throw UsageError("series: order " + std::to_string(k) + " outside 0.." + std::to_string(k_max_));
    }
  }

  Bipartition bip_;
  int k_max_;
  std::vector<DenseOperator<T>> trace_powers_;
  std::vector<T> bath_traces_;
};

template <ExtendedReal T>
SeriesCoefficient<T> series_coefficient(const Bipartition& bip, int k) {
  return SeriesEngine<T>(bip, k).coefficient(k);
}

// ---------------------------------------------------------------------------
// Closed forms for k = 0, 1, 2 (a = H_A, b = H_B, c = H_AB on the full chain)

template <ExtendedReal T>
struct ClosedForms {
  DenseOperator<T> k0;
  DenseOperator<T> k1;
  DenseOperator<T> k2;
};

template <ExtendedReal T>
ClosedForms<T> closed_forms(const Bipartition& bip) {
  const int l = bip.n_sites;
  const int la = bip.n_sites_a;
  const auto a = dense<T>(bip.h_a);
  const auto b = dense<T>(bip.h_b);
  const auto c = dense<T>(bip.h_ab);
  const T inv_db = T(1) / T(static_cast<double>(bip.dim_b()));
  auto trb = [&](const DenseOperator<T>& m) { return partial_trace_B(m, l, la); };
  const auto ha = dense<T>(restrict_to_a(bip.h_a, la));
  const auto cc = c * c;
  const auto tcc = trb(cc);

  ClosedForms<T> out;
  out.k0 = ha;
  // -tr_B(c^2)/(2 D_B) - tr_B(b c)/D_B
  out.k1 = (tcc * T(0.5) + trb(b * c)) * (-inv_db);
  // (1/6D_B)[tr_B(cac) + 3 tr_B(b^2 c) + 2 tr_B(b c^2) + tr_B(cbc) + tr_B(c^3)] - (1/12D_B){H_A, tr_B(c^2)}
  auto inner = trb(c * a * c) + trb(b * b * c) * T(3) + trb(b * cc) * T(2) + trb(c * b * c) + trb(cc * c);
  auto anti = ha * tcc + tcc * ha;
  out.k2 = inner * (inv_db / T(6)) - anti * (inv_db / T(12));
  return out;
}

/// The printed second-order form (1/6D_B)[tr_B(c a c) - tr_B(c^2) H_A].
template <ExtendedReal T>
DenseOperator<T> printed_second_order(const Bipartition& bip) {
  const auto a = dense<T>(bip.h_a);
  const auto c = dense<T>(bip.h_ab);
  const auto ha = dense<T>(restrict_to_a(bip.h_a, bip.n_sites_a));
  const T inv_db = T(1) / T(static_cast<double>(bip.dim_b()));
  auto r = partial_trace_B(c * a * c, bip.n_sites, bip.n_sites_a) -
           partial_trace_B(c * c, bip.n_sites, bip.n_sites_a) * ha;
  r *= inv_db / T(6);
  return r;
}

/// X - (tr X / dim) I
template <ExtendedReal T>
DenseOperator<T> traceless_part(DenseOperator<T> x) {
  const T mean = x.trace().re / T(static_cast<double>(x.dim()));
  for (std::size_t i = 0; i < x.dim(); ++i) x(i, i).re -= mean;
  return x;
}

/// ||X||_F / sqrt(dim): bounds every Pauli coefficient of X.
template <ExtendedReal T>
double normalized_norm(const DenseOperator<T>& x) {
  using std::sqrt;
  return num::to_double(x.frobenius_norm() / sqrt(T(static_cast<double>(x.dim()))));
}

// ---------------------------------------------------------------------------
// Tables and orders

template <ExtendedReal T>
CoefficientTable series_deviation_table(const SeriesCoefficient<T>& coeff, const DenseOperator<T>& h_a,
                                        const std::vector<PauliString>& ops, double floor) {
  int la = 0;
  while ((std::size_t{1} << la) < coeff.matrix.dim()) ++la;
  require_ops_in_a(ops, la);
  CoefficientTable t =
      coeff.order == 0 ? make_table(0.0, floor, la, coeff.matrix - h_a, ops) : make_table(0.0, floor, la, coeff.matrix, ops);
  t.order = coeff.order;
  return t;
}

/// Default detection threshold: 2^(-P+30) * max_k ||H*_{A,k}||_F / sqrt(dim).
template <ExtendedReal T>
double default_order_tolerance(const std::vector<SeriesCoefficient<T>>& coeffs) {
  double m = 0.0;
  for (const auto& c : coeffs) m = std::max(m, normalized_norm(c.matrix));
  return num::to_double(num::tolerance<T>(30)) * m;
}

/// Smallest k >= 1 with |c_k(O)| > tol among tables ordered by k.
std::optional<int> k0_numeric(const std::vector<CoefficientTable>& tables, const PauliString& op, double tol);

/// 2(d+1) - n
int k0_lower_bound(const PauliString& op, int n_sites_a);

/// ||H*(beta) - sum_{k<=K} beta^k H*_{A,k}||_F / 2^(L_A/2)
template <ExtendedReal T>
double truncation_error(const ThermalEngine<T>& thermal, const std::vector<SeriesCoefficient<T>>& coeffs,
                        double beta, int order) {
  if (order < 0 || order >= static_cast<int>(coeffs.size())) throw UsageError("truncation_error: order out of range");
  auto d = thermal.compute(beta).hmf;
  T bk(1);
  const T b(beta);
  for (int k = 0; k <= order; ++k) {
    d -= coeffs[static_cast<std::size_t>(k)].matrix * bk;
    bk = bk * b;
  }
  return normalized_norm(d);
}

}  // namespace hmf
