// states.hpp
// Quantum states: kets, rank-1 projections, density operators, ensembles,
// Bell states, the maximally mixed state, and unitary evolution.
//
// A DensityOperator is validated once at construction (positive, trace 1
// at tolerance 1e-9); every operation returning a density re-validates by
// constructing a fresh one. Separability (a state being a convex mix of
// tensor products) is a definition only; no decision procedure is offered.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qpm/complex_matrix.hpp"
#include "qpm/errors.hpp"

namespace qpm {

inline Complex inner(const CVector& u, const CVector& v) {
  if (u.dim() != v.dim()) {
    throw DimensionError("inner product dimension mismatch: " + std::to_string(u.dim()) +
                         " vs " + std::to_string(v.dim()));
  }
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < u.dim(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm(const CVector& v) { return std::sqrt(inner(v, v).real()); }

// Outer product |v><v| of a unit ket. Built hermitian by construction:
// the lower triangle mirrors the conjugate upper one, diagonal is real.
inline CMatrix rank1proj(const CVector& v) {
  const double nv = norm(v);
  if (std::abs(nv - 1.0) > kDefaultTol) {
    throw ValidationError("rank1proj requires a normalized vector, got norm " +
                          std::to_string(nv));
  }
  const std::size_t n = v.dim();
  std::vector<Complex> out(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = Complex(std::norm(v[i]), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      out[i * n + j] = v[i] * std::conj(v[j]);
      out[j * n + i] = std::conj(out[i * n + j]);
    }
  }
  return CMatrix(n, n, std::move(out));
}

// Positive trace-1 operator describing a quantum state, pure or mixed.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix m) : mat_(std::move(m)) {
    if (!mat_.square()) {
      throw ValidationError("density operator must be square, got " + mat_.shape());
    }
    const MatrixClass cls = classify(mat_, kDefaultTol);
    if (!cls.hermitian) {
      throw ValidationError("density operator invariant violated: not hermitian");
    }
    if (!cls.positive) {
      throw ValidationError("density operator invariant violated: not positive");
    }
    const Complex t = trace(mat_);
    if (std::abs(t - Complex(1.0, 0.0)) > kDefaultTol) {
      throw ValidationError("density operator invariant violated: trace = (" +
                            std::to_string(t.real()) + ", " + std::to_string(t.imag()) +
                            "), expected 1");
    }
  }

  const CMatrix& mat() const { return mat_; }
  std::size_t dim() const { return mat_.rows(); }

  friend bool operator==(const DensityOperator& a, const DensityOperator& b) {
    return a.mat_ == b.mat_;
  }

 private:
  CMatrix mat_;
};

// rho = sum_i p_i |v_i><v_i| for nonnegative weights summing to one.
inline DensityOperator ensemble_density(const std::vector<double>& ps,
                                        const std::vector<CVector>& vs) {
  if (ps.empty() || ps.size() != vs.size()) {
    throw ValidationError("ensemble_density: need equally many weights and vectors");
  }
  double sum = 0.0;
  for (double p : ps) {
    if (p < 0.0) {
      throw ValidationError("ensemble_density: negative weight " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kDefaultTol) {
    throw ValidationError("ensemble_density: weights sum to " + std::to_string(sum) +
                          ", expected 1");
  }
  const std::size_t n = vs.front().dim();
  for (const CVector& v : vs) {
    if (v.dim() != n) {
      throw DimensionError("ensemble_density: mixed vector dimensions");
    }
  }
  CMatrix acc = CMatrix::zero(n, n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    acc = acc + ps[i] * rank1proj(vs[i]);
  }
  return DensityOperator(std::move(acc));
}

// (1/n) I_n, the state of maximal uncertainty.
inline DensityOperator max_mixed(std::size_t n) {
  if (n == 0) throw ValidationError("max_mixed: dimension must be >= 1");
  return DensityOperator((1.0 / static_cast<double>(n)) * CMatrix::identity(n));
}

enum class BellKind { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

// The four maximally entangled two-qubit kets in the |00>,|01>,|10>,|11>
// basis order fixed by the Kronecker product convention.
inline CVector bell_state(BellKind k) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (k) {
    case BellKind::PhiPlus:
      return CVector({Complex(r, 0), Complex(0, 0), Complex(0, 0), Complex(r, 0)});
    case BellKind::PhiMinus:
      return CVector({Complex(r, 0), Complex(0, 0), Complex(0, 0), Complex(-r, 0)});
    case BellKind::PsiPlus:
      return CVector({Complex(0, 0), Complex(r, 0), Complex(r, 0), Complex(0, 0)});
    case BellKind::PsiMinus:
    default:
      return CVector({Complex(0, 0), Complex(r, 0), Complex(-r, 0), Complex(0, 0)});
  }
}

// rho' = U rho U^dagger.
inline DensityOperator evolve(const DensityOperator& rho, const CMatrix& u) {
  if (!u.square() || u.rows() != rho.dim()) {
    throw DimensionError("evolve: unitary shape " + u.shape() +
                         " does not match state dimension " + std::to_string(rho.dim()));
  }
  if (!classify(u).unitary) {
    throw ValidationError("evolve: operator is not unitary within tolerance");
  }
  return DensityOperator(matmul(matmul(u, rho.mat()), adjoint(u)));
}

// Joint state of independently prepared subsystems, left-fold tensor product.
inline DensityOperator compose(const std::vector<DensityOperator>& rhos) {
  if (rhos.empty()) throw ValidationError("compose: need at least one state");
  CMatrix acc = rhos.front().mat();
  for (std::size_t i = 1; i < rhos.size(); ++i) {
    acc = tensor(acc, rhos[i].mat());
  }
  return DensityOperator(std::move(acc));
}

}  // namespace qpm
