#pragma once

// Hermitian eigendecomposition by cyclic Jacobi rotations and the matrix
// functions built on it.  The sweep order is fixed (row-cyclic, p < q), so
// identical input bits give identical output bits.

#include <algorithm>
#include <numeric>
#include <sstream>
#include <variant>
#include <vector>

#include "hmflab/dense.hpp"

namespace hmf {

template <ExtendedReal T>
struct SpectralDecomposition {
  std::vector<T> eigenvalues;     // ascending
  DenseOperator<T> eigenvectors;  // columns
  int sweeps = 0;
};

struct JacobiOptions {
  int max_sweeps = 60;
};

namespace detail {

template <ExtendedReal T>
void require_hermitian(const DenseOperator<T>& m, const char* who) {
  const T scale = m.frobenius_norm();
  const T defect = m.hermiticity_defect();
  if (defect > num::tolerance<T>(8) * scale) {
    std::ostringstream os;
    os << who << ": input is not Hermitian (||M - M^dagger||_F = " << num::to_double(defect)
       << ", ||M||_F = " << num::to_double(scale) << ")";
    throw UsageError(os.str());
  }
}

// Off-diagonal Frobenius norm of a row-major real or complex array.
template <ExtendedReal T>
T off_norm_real(const std::vector<T>& a, std::size_t n) {
  using std::sqrt;
  T s(0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) s += a[p * n + q] * a[p * n + q];
  }
  return sqrt(s + s);
}

// Rotation parameters zeroing the (p,q) entry of a symmetric 2x2 block with
// off-diagonal value r.  Returns (c, s) with the Rutishauser choice |t| <= 1.
template <ExtendedReal T>
std::pair<T, T> jacobi_angle(const T& app, const T& aqq, const T& r) {
  using std::abs;
  using std::sqrt;
  const T theta = (aqq - app) / (r + r);
  T t = T(1) / (abs(theta) + sqrt(theta * theta + T(1)));
  if (theta < T(0)) t = -t;
  const T c = T(1) / sqrt(t * t + T(1));
  return {c, t * c};
}

template <ExtendedReal T>
bool negligible(const T& apq_abs, const T& app, const T& aqq, const T& abs_floor, const T& rel) {
  using std::abs;
  using std::sqrt;
  if (apq_abs <= abs_floor) return true;
  return apq_abs <= rel * sqrt(abs(app) * abs(aqq));
}

template <ExtendedReal T>
SpectralDecomposition<T> jacobi_real(const DenseOperator<T>& m, const JacobiOptions& opt) {
  using std::abs;
  const std::size_t n = m.dim();
  std::vector<T> a(n * n);
  std::vector<T> v(n * n, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    v[i * n + i] = T(1);
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = (m(i, j).re + m(j, i).re) / T(2);
  }
  const T scale = m.frobenius_norm();
  const T abs_floor = num::tolerance<T>(-4) * scale;
  const T rel = num::tolerance<T>(-2);

  int sweep = 0;
  for (; sweep < opt.max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const T apq = a[p * n + q];
        if (negligible(abs(apq), a[p * n + p], a[q * n + q], abs_floor, rel)) {
          a[p * n + q] = T(0);
          a[q * n + p] = T(0);
          continue;
        }
        rotated = true;
        auto [c, s] = jacobi_angle(a[p * n + p], a[q * n + q], apq);
        for (std::size_t k = 0; k < n; ++k) {
          const T x = a[k * n + p];
          const T y = a[k * n + q];
          a[k * n + p] = c * x - s * y;
          a[k * n + q] = s * x + c * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const T x = a[p * n + k];
          const T y = a[q * n + k];
          a[p * n + k] = c * x - s * y;
          a[q * n + k] = s * x + c * y;
        }
        a[p * n + q] = T(0);
        a[q * n + p] = T(0);
        for (std::size_t k = 0; k < n; ++k) {
          const T x = v[k * n + p];
          const T y = v[k * n + q];
          v[k * n + p] = c * x - s * y;
          v[k * n + q] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == opt.max_sweeps) {
    std::ostringstream os;
    os << "hermitian_eigen: no convergence after " << opt.max_sweeps
       << " sweeps (off-diagonal norm " << num::to_double(off_norm_real(a, n)) << ")";
    throw NumericalError(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a[i * n + i] < a[j * n + j]; });
  SpectralDecomposition<T> out;
  out.sweeps = sweep;
  out.eigenvalues.reserve(n);
  out.eigenvectors = DenseOperator<T>(n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues.push_back(a[src * n + src]);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, col) = Complex<T>(v[k * n + src]);
  }
  return out;
}

template <ExtendedReal T>
SpectralDecomposition<T> jacobi_complex(const DenseOperator<T>& m, const JacobiOptions& opt) {
  using std::sqrt;
  const std::size_t n = m.dim();
  DenseOperator<T> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex<T> z = m(i, j) + conj(m(j, i));
      a(i, j) = Complex<T>(z.re / T(2), z.im / T(2));
    }
  }
  DenseOperator<T> v = DenseOperator<T>::identity(n);
  const T scale = m.frobenius_norm();
  const T abs_floor = num::tolerance<T>(-4) * scale;
  const T rel = num::tolerance<T>(-2);

  int sweep = 0;
  for (; sweep < opt.max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex<T> apq = a(p, q);
        const T r = sqrt(norm2(apq));
        if (negligible(r, a(p, p).re, a(q, q).re, abs_floor, rel)) {
          a(p, q) = Complex<T>();
          a(q, p) = Complex<T>();
          continue;
        }
        rotated = true;
        // a_pq = r e^{i phi}; w = e^{-i phi} rotates it onto the real axis.
        const Complex<T> w(apq.re / r, -apq.im / r);
        const Complex<T> wc = conj(w);
        auto [c, s] = jacobi_angle(a(p, p).re, a(q, q).re, r);
        const Complex<T> sw = w * s;
        const Complex<T> cw = w * c;
        const Complex<T> swc = wc * s;
        const Complex<T> cwc = wc * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Complex<T> x = a(k, p);
          const Complex<T> y = a(k, q);
          a(k, p) = x * c - sw * y;
          a(k, q) = x * s + cw * y;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex<T> x = a(p, k);
          const Complex<T> y = a(q, k);
          a(p, k) = x * c - swc * y;
          a(q, k) = x * s + cwc * y;
        }
        a(p, q) = Complex<T>();
        a(q, p) = Complex<T>();
        a(p, p).im = T(0);
        a(q, q).im = T(0);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex<T> x = v(k, p);
          const Complex<T> y = v(k, q);
          v(k, p) = x * c - sw * y;
          v(k, q) = x * s + cw * y;
        }
      }
    }
    if (!rotated) break;
  }
  if (sweep == opt.max_sweeps) {
    throw NumericalError("hermitian_eigen: no convergence after " + std::to_string(opt.max_sweeps) +
                         " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).re < a(j, j).re; });
  SpectralDecomposition<T> out;
  out.sweeps = sweep;
  out.eigenvectors = DenseOperator<T>(n);
  for (std::size_t col = 0; col < n; ++col) {
    const std::size_t src = order[col];
    out.eigenvalues.push_back(a(src, src).re);
    for (std::size_t k = 0; k < n; ++k) out.eigenvectors(k, col) = v(k, src);
  }
  return out;
}

}  // namespace detail

/// Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.
/// Real symmetric input takes a real-arithmetic path with identical results.
template <ExtendedReal T>
SpectralDecomposition<T> hermitian_eigen(const DenseOperator<T>& m, const JacobiOptions& opt = {}) {
  if (m.dim() == 0) throw UsageError("hermitian_eigen: empty matrix");
  detail::require_hermitian(m, "hermitian_eigen");
  return m.is_real() ? detail::jacobi_real(m, opt) : detail::jacobi_complex(m, opt);
}

/// V diag(values) V^dagger
template <ExtendedReal T>
DenseOperator<T> spectral_synthesis(const DenseOperator<T>& vectors, std::span<const T> values) {
  const std::size_t n = vectors.dim();
  DenseOperator<T> r(n);
  if (vectors.is_real()) {
    std::vector<T> vt(n * n);  // transpose scaled by values: vt[k][j] = f_k V_jk
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) vt[k * n + j] = values[k] * vectors(j, k).re;
    }
    std::vector<T> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(row.begin(), row.end(), T(0));
      for (std::size_t k = 0; k < n; ++k) {
        const T& vik = vectors(i, k).re;
        if (vik == T(0)) continue;
        const T* src = &vt[k * n];
        for (std::size_t j = 0; j < n; ++j) row[j] += vik * src[j];
      }
      for (std::size_t j = 0; j < n; ++j) r(i, j).re = row[j];
    }
    return r;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex<T> s;
      for (std::size_t k = 0; k < n; ++k) s += vectors(i, k) * conj(vectors(j, k)) * values[k];
      r(i, j) = s;
    }
  }
  return r;
}

/// e^{-beta M}
struct ExpScaled {
  double beta;
};
/// natural log; input must be positive definite
struct Log {};
using MatrixFunction = std::variant<ExpScaled, Log>;

/// Applies f to the spectrum of an already decomposed Hermitian matrix.
template <ExtendedReal T>
DenseOperator<T> apply_function(const SpectralDecomposition<T>& sd, const MatrixFunction& f) {
  using std::exp;
  using std::log;
  const std::size_t n = sd.eigenvalues.size();
  std::vector<T> values(n);
  if (const auto* e = std::get_if<ExpScaled>(&f)) {
    const T beta(e->beta);
    for (std::size_t k = 0; k < n; ++k) values[k] = exp(-beta * sd.eigenvalues[k]);
  } else {
    using std::abs;
    T largest(0);
    for (const auto& x : sd.eigenvalues) largest = std::max(largest, T(abs(x)));
    const T threshold = T(static_cast<double>(n)) * num::tolerance<T>(16) * largest;
    if (sd.eigenvalues.front() <= threshold) {
      std::ostringstream os;
      os << "matrix log: input is not positive definite (smallest eigenvalue "
         << num::to_double(sd.eigenvalues.front()) << ")";
      throw DomainError(os.str(), num::to_double(sd.eigenvalues.front()));
    }
    for (std::size_t k = 0; k < n; ++k) values[k] = log(sd.eigenvalues[k]);
  }
  return spectral_synthesis<T>(sd.eigenvectors, values);
}

template <ExtendedReal T>
DenseOperator<T> func_hermitian(const DenseOperator<T>& m, const MatrixFunction& f) {
  return apply_function(hermitian_eigen(m), f);
}

}  // namespace hmf
