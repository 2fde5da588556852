#pragma once

// Dense complex matrices at a compile-time selected real precision.  Storage
// is row-major.  Many operators in this project are real symmetric, so the
// heavier kernels check `is_real()` and skip the imaginary arithmetic.

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hmflab/errors.hpp"
#include "hmflab/numeric.hpp"

namespace hmf {

template <ExtendedReal T>
struct Complex {
  T re{0};
  T im{0};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT(implicit)
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(const Complex& a, const T& s) { return {a.re * s, a.im * s}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
};

template <ExtendedReal T>
Complex<T> conj(const Complex<T>& z) {
  return {z.re, -z.im};
}

template <ExtendedReal T>
T norm2(const Complex<T>& z) {
  return z.re * z.re + z.im * z.im;
}

template <ExtendedReal T>
class DenseOperator {
 public:
  DenseOperator() = default;
  explicit DenseOperator(std::size_t dim) : dim_(dim), data_(dim * dim) {}

  static DenseOperator identity(std::size_t dim) {
    DenseOperator m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = Complex<T>(T(1));
    return m;
  }

  static DenseOperator diagonal(std::span<const T> d) {
    DenseOperator m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = Complex<T>(d[i]);
    return m;
  }

  [[nodiscard]] std::size_t dim() const { return dim_; }
  [[nodiscard]] int precision() const { return num::precision_bits<T>(); }

  Complex<T>& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const Complex<T>& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  [[nodiscard]] std::span<const Complex<T>> entries() const { return data_; }
  [[nodiscard]] std::span<Complex<T>> entries() { return data_; }

  [[nodiscard]] bool is_real() const {
    for (const auto& z : data_) {
      if (z.im != T(0)) return false;
    }
    return true;
  }

  [[nodiscard]] DenseOperator adjoint() const {
    DenseOperator r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) r(j, i) = conj((*this)(i, j));
    }
    return r;
  }

  [[nodiscard]] T frobenius_norm() const {
    using std::sqrt;
    T s(0);
    for (const auto& z : data_) s += norm2(z);
    return sqrt(s);
  }

  [[nodiscard]] Complex<T> trace() const {
    Complex<T> t;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
  }

  /// ||M - M^dagger||_F
  [[nodiscard]] T hermiticity_defect() const {
    using std::sqrt;
    T s(0);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t j = 0; j < dim_; ++j) s += norm2((*this)(i, j) - conj((*this)(j, i)));
    }
    return sqrt(s);
  }

  /// M <- (M + M^dagger)/2
  DenseOperator& hermitize() {
    const T half(0.5);
    for (std::size_t i = 0; i < dim_; ++i) {
      (*this)(i, i).im = T(0);
      for (std::size_t j = i + 1; j < dim_; ++j) {
        auto& a = (*this)(i, j);
        auto& b = (*this)(j, i);
        const T re = (a.re + b.re) * half;
        const T im = (a.im - b.im) * half;
        a.re = re;
        a.im = im;
        b.re = re;
        b.im = -im;
      }
    }
    return *this;
  }

  DenseOperator& operator+=(const DenseOperator& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  DenseOperator& operator-=(const DenseOperator& o) {
    require_same_dim(o);
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  DenseOperator& operator*=(const T& s) {
    for (auto& z : data_) z = z * s;
    return *this;
  }

  friend DenseOperator operator+(DenseOperator a, const DenseOperator& b) { return a += b; }
  friend DenseOperator operator-(DenseOperator a, const DenseOperator& b) { return a -= b; }
  friend DenseOperator operator*(DenseOperator a, const T& s) { return a *= s; }
  friend DenseOperator operator*(const T& s, DenseOperator a) { return a *= s; }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    a.require_same_dim(b);
    const std::size_t n = a.dim_;
    DenseOperator c(n);
    if (a.is_real() && b.is_real()) {
      std::vector<T> row(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::fill(row.begin(), row.end(), T(0));
        for (std::size_t k = 0; k < n; ++k) {
          const T& aik = a(i, k).re;
          if (aik == T(0)) continue;
          const Complex<T>* brow = &b.data_[k * n];
          for (std::size_t j = 0; j < n; ++j) row[j] += aik * brow[j].re;
        }
        for (std::size_t j = 0; j < n; ++j) c(i, j).re = row[j];
      }
      return c;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const Complex<T>& aik = a(i, k);
        if (aik.re == T(0) && aik.im == T(0)) continue;
        const Complex<T>* brow = &b.data_[k * n];
        Complex<T>* crow = &c.data_[i * n];
        for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
      }
    }
    return c;
  }

 private:
  void require_same_dim(const DenseOperator& o) const {
    if (o.dim_ != dim_) {
      throw UsageError("dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
    }
  }

  std::size_t dim_ = 0;
  std::vector<Complex<T>> data_;
};

/// Partial trace over the last L - L_A sites.  Site 1 is the most significant
/// qubit, so a full basis index is a * 2^(L-L_A) + b with a indexing A.
template <ExtendedReal T>
DenseOperator<T> partial_trace_B(const DenseOperator<T>& m, int n_sites, int n_sites_a) {
  if (n_sites < 2 || n_sites_a < 1 || n_sites_a >= n_sites) {
    throw UsageError("partial_trace_B: need 1 <= L_A < L, got L=" + std::to_string(n_sites) +
                     " L_A=" + std::to_string(n_sites_a));
  }
  const std::size_t dim_a = std::size_t{1} << n_sites_a;
  const std::size_t dim_b = std::size_t{1} << (n_sites - n_sites_a);
  if (m.dim() != dim_a * dim_b) {
    throw UsageError("partial_trace_B: operator dimension " + std::to_string(m.dim()) +
                     " is not 2^" + std::to_string(n_sites));
  }
  DenseOperator<T> r(dim_a);
  for (std::size_t a = 0; a < dim_a; ++a) {
    for (std::size_t ap = 0; ap < dim_a; ++ap) {
      Complex<T> s;
      for (std::size_t b = 0; b < dim_b; ++b) s += m(a * dim_b + b, ap * dim_b + b);
      r(a, ap) = s;
    }
  }
  return r;
}

/// Full trace over A of an operator on A (x) B, leaving an operator on B.
template <ExtendedReal T>
DenseOperator<T> partial_trace_A(const DenseOperator<T>& m, int n_sites, int n_sites_a) {
  const std::size_t dim_a = std::size_t{1} << n_sites_a;
  const std::size_t dim_b = std::size_t{1} << (n_sites - n_sites_a);
  if (m.dim() != dim_a * dim_b) throw UsageError("partial_trace_A: dimension mismatch");
  DenseOperator<T> r(dim_b);
  for (std::size_t b = 0; b < dim_b; ++b) {
    for (std::size_t bp = 0; bp < dim_b; ++bp) {
      Complex<T> s;
      for (std::size_t a = 0; a < dim_a; ++a) s += m(a * dim_b + b, a * dim_b + bp);
      r(b, bp) = s;
    }
  }
  return r;
}

/// Kronecker product a (x) b with a on the more significant qubits.
template <ExtendedReal T>
DenseOperator<T> kron(const DenseOperator<T>& a, const DenseOperator<T>& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  DenseOperator<T> r(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < na; ++j) {
      const Complex<T>& aij = a(i, j);
      if (aij.re == T(0) && aij.im == T(0)) continue;
      for (std::size_t k = 0; k < nb; ++k) {
        for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
      }
    }
  }
  return r;
}

/// Precision conversion.  Narrowing from MPFR keeps two doubles' worth of bits.
template <ExtendedReal To, ExtendedReal From>
To convert_scalar(const From& x) {
  if constexpr (std::same_as<To, From>) {
    return x;
  } else if constexpr (std::same_as<From, DDReal>) {
    return To(x.hi()) + To(x.lo());
  } else if constexpr (std::same_as<From, double>) {
    return To(x);
  } else {
    // MPFR -> narrower: round through double pieces
    double hi = static_cast<double>(x);
    if constexpr (std::same_as<To, double>) {
      return hi;
    } else {
      return To(hi) + To(static_cast<double>(x - From(hi)));
    }
  }
}

template <ExtendedReal To, ExtendedReal From>
DenseOperator<To> convert(const DenseOperator<From>& m) {
  DenseOperator<To> r(m.dim());
  auto src = m.entries();
  auto dst = r.entries();
  for (std::size_t k = 0; k < src.size(); ++k) {
    dst[k] = Complex<To>(convert_scalar<To>(src[k].re), convert_scalar<To>(src[k].im));
  }
  return r;
}

}  // namespace hmf
