// complex_matrix.hpp
// Dense complex matrices and vectors plus the operator predicates
// (hermitian / unitary / projector / positive) everything else builds on.
//
// Values are immutable after construction and all operations are pure
// functions, so instances may be shared between threads without locking.
// Non-finite components are rejected at construction, never at use sites.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qpm/detail/jacobi.hpp"
#include "qpm/errors.hpp"

namespace qpm {

using Complex = std::complex<double>;

// Default relative Frobenius tolerance for every predicate in the library.
// Eigensolver residuals sit near 1e-12, leaving three orders of margin.
inline constexpr double kDefaultTol = 1e-9;

namespace detail {

inline bool is_finite(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline std::string shape_str(std::size_t r, std::size_t c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace detail

// Dense row-major complex matrix. Column vectors are n x 1 matrices where
// a matrix is expected; CVector below is the ket-flavoured view.
class CMatrix {
 public:
  CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0) {
      throw ValidationError("matrix dimensions must be positive, got " +
                            detail::shape_str(rows_, cols_));
    }
    if (entries_.size() != rows_ * cols_) {
      throw ValidationError("matrix entry count " + std::to_string(entries_.size()) +
                            " does not match shape " + detail::shape_str(rows_, cols_));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!detail::is_finite(entries_[i])) {
        throw ValidationError("non-finite matrix entry at flat index " + std::to_string(i));
      }
    }
  }

  static CMatrix zero(std::size_t rows, std::size_t cols) {
    return CMatrix(rows, cols, std::vector<Complex>(rows * cols, Complex(0.0, 0.0)));
  }

  static CMatrix identity(std::size_t n) {
    std::vector<Complex> e(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = Complex(1.0, 0.0);
    return CMatrix(n, n, std::move(e));
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  std::string shape() const { return detail::shape_str(rows_, cols_); }

  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }
  const std::vector<Complex>& entries() const { return entries_; }

  friend bool operator==(const CMatrix& a, const CMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> entries_;
};

// Ket vector; dim equals the entry count by construction.
class CVector {
 public:
  explicit CVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("vector dimension must be positive");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (!detail::is_finite(entries_[i])) {
        throw ValidationError("non-finite vector entry at index " + std::to_string(i));
      }
    }
  }

  std::size_t dim() const { return entries_.size(); }
  const Complex& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Complex>& entries() const { return entries_; }

 private:
  std::vector<Complex> entries_;
};

inline CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul shape mismatch: " + a.shape() + " * " + b.shape());
  }
  std::vector<Complex> out(a.rows() * b.cols(), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex(0.0, 0.0)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out[i * b.cols() + j] += aik * b(k, j);
      }
    }
  }
  return CMatrix(a.rows(), b.cols(), std::move(out));
}

inline CMatrix adjoint(const CMatrix& a) {
  std::vector<Complex> out(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      out[j * a.rows() + i] = std::conj(a(i, j));
    }
  }
  return CMatrix(a.cols(), a.rows(), std::move(out));
}

inline Complex trace(const CMatrix& a) {
  if (!a.square()) {
    throw DimensionError("trace requires a square matrix, got " + a.shape());
  }
  Complex t(0.0, 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

// Kronecker product; block (i,j) of the result equals a(i,j) * b.
inline CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  const std::size_t rows = a.rows() * b.rows();
  const std::size_t cols = a.cols() * b.cols();
  std::vector<Complex> out(rows * cols);
  for (std::size_t ia = 0; ia < a.rows(); ++ia) {
    for (std::size_t ja = 0; ja < a.cols(); ++ja) {
      const Complex f = a(ia, ja);
      for (std::size_t ib = 0; ib < b.rows(); ++ib) {
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
          out[(ia * b.rows() + ib) * cols + (ja * b.cols() + jb)] = f * b(ib, jb);
        }
      }
    }
  }
  return CMatrix(rows, cols, std::move(out));
}

inline CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix sum shape mismatch: " + a.shape() + " + " + b.shape());
  }
  std::vector<Complex> out(a.entries());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
  return CMatrix(a.rows(), a.cols(), std::move(out));
}

inline CMatrix operator-(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("matrix difference shape mismatch: " + a.shape() + " - " +
                         b.shape());
  }
  std::vector<Complex> out(a.entries());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
  return CMatrix(a.rows(), a.cols(), std::move(out));
}

inline CMatrix operator*(const Complex& s, const CMatrix& a) {
  std::vector<Complex> out(a.entries());
  for (Complex& z : out) z *= s;
  return CMatrix(a.rows(), a.cols(), std::move(out));
}

inline CMatrix operator*(double s, const CMatrix& a) { return Complex(s, 0.0) * a; }

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) { return matmul(a, b); }

// Frobenius norm, the canonical distance everywhere in this library.
inline double frobenius_norm(const CMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return std::sqrt(s);
}

inline double frobenius_distance(const CMatrix& a, const CMatrix& b) {
  return frobenius_norm(a - b);
}

// Column j of m as a ket.
inline CVector column(const CMatrix& m, std::size_t j) {
  if (j >= m.cols()) {
    throw DimensionError("column index " + std::to_string(j) + " out of range for " +
                         m.shape());
  }
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m(i, j);
  return CVector(std::move(out));
}

struct MatrixClass {
  bool hermitian = false;
  bool unitary = false;
  bool projector = false;
  bool positive = false;
};

// Toleranced operator predicates. hermitian is relative in ||a||_F; the
// others are absolute at `tol`. positive requires hermitian and checks the
// smallest eigenvalue of the symmetrized matrix.
inline MatrixClass classify(const CMatrix& a, double tol = kDefaultTol) {
  if (!a.square()) {
    throw DimensionError("classify requires a square matrix, got " + a.shape());
  }
  if (tol <= 0.0) throw ValidationError("classify tolerance must be positive");

  const std::size_t n = a.rows();
  MatrixClass cls;

  const CMatrix adj = adjoint(a);
  const double na = frobenius_norm(a);
  cls.hermitian = frobenius_distance(a, adj) <= tol * std::max(1.0, na);

  const CMatrix eye = CMatrix::identity(n);
  cls.unitary = frobenius_distance(matmul(a, adj), eye) <= tol &&
                frobenius_distance(matmul(adj, a), eye) <= tol;

  cls.projector = cls.hermitian && frobenius_distance(matmul(a, a), a) <= tol;

  if (cls.hermitian) {
    const auto jac = detail::jacobi_hermitian(a.entries(), n);
    if (!jac.converged) {
      throw NumericalError("classify: eigensolver did not converge, off-norm " +
                           std::to_string(jac.off_norm));
    }
    const double min_ev = *std::min_element(jac.diag.begin(), jac.diag.end());
    cls.positive = min_ev >= -tol;
  }
  return cls;
}

}  // namespace qpm
