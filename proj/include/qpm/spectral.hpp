// spectral.hpp
// Hermitian eigendecomposition and eigenvalue grouping: the (Lambda, U)
// pair with U unitary and A = U Lambda U^dagger, plus the partition of
// eigenvalue indices into degeneracy classes that measurement
// construction consumes.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "qpm/complex_matrix.hpp"
#include "qpm/detail/jacobi.hpp"
#include "qpm/errors.hpp"

namespace qpm {

// evals are sorted descending; column j of u is the eigenvector of evals[j].
struct EigenDecomposition {
  std::vector<double> evals;
  CMatrix u;
};

// distinct eigenvalues (descending) and, per distinct value, the set of
// eigenvalue indices grouped to it. The classes partition {0,...,n-1}.
struct SpectrumPartition {
  std::vector<double> distinct;
  std::vector<std::vector<std::size_t>> classes;
};

// Grouping tolerance that survives exact degeneracies and re-merges
// numerically split ones.
inline double default_grouping_tol(const std::vector<double>& evals) {
  double m = 0.0;
  for (double v : evals) m = std::max(m, std::abs(v));
  return std::max(1e-10, 1e-8 * m);
}

inline EigenDecomposition eig_hermitian(const CMatrix& a) {
  const MatrixClass cls = classify(a);
  if (!cls.hermitian) {
    throw ValidationError("eig_hermitian: input is not hermitian within tolerance (" +
                          a.shape() + ", ||a - a^dagger||_F = " +
                          std::to_string(frobenius_distance(a, adjoint(a))) + ")");
  }

  const std::size_t n = a.rows();
  const auto jac = detail::jacobi_hermitian(a.entries(), n);
  if (!jac.converged) {
    throw NumericalError("eig_hermitian: Jacobi sweeps did not converge after " +
                         std::to_string(jac.sweeps) + " sweeps, off-diagonal norm " +
                         std::to_string(jac.off_norm));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&jac](std::size_t i, std::size_t j) {
    return jac.diag[i] > jac.diag[j];
  });

  std::vector<double> evals(n);
  std::vector<Complex> u(n * n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    evals[j] = jac.diag[src];
    for (std::size_t i = 0; i < n; ++i) u[i * n + j] = jac.vectors[i * n + src];
  }

  // Deterministic phase: first nonzero component of each column real-positive.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex v = u[i * n + j];
      if (std::abs(v) > 1e-12) {
        const Complex f = std::conj(v) / std::abs(v);
        for (std::size_t k = 0; k < n; ++k) u[k * n + j] *= f;
        break;
      }
    }
  }

  EigenDecomposition dec{std::move(evals), CMatrix(n, n, std::move(u))};

  // Postcondition audit: reconstruction and unitarity at 1e-10.
  CMatrix lambda = CMatrix::zero(n, n);
  {
    std::vector<Complex> d(n * n, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = Complex(dec.evals[i], 0.0);
    lambda = CMatrix(n, n, std::move(d));
  }
  const CMatrix recon = matmul(matmul(dec.u, lambda), adjoint(dec.u));
  const double recon_res = frobenius_distance(a, recon);
  const double unit_res = frobenius_distance(matmul(adjoint(dec.u), dec.u),
                                             CMatrix::identity(n));
  if (recon_res > 1e-10 * std::max(1.0, frobenius_norm(a)) || unit_res > 1e-10) {
    throw NumericalError("eig_hermitian: decomposition residuals too large "
                         "(reconstruction " + std::to_string(recon_res) +
                         ", unitarity " + std::to_string(unit_res) + ")");
  }
  return dec;
}

// Greedy left-to-right merge of adjacent values within tol; each class is
// represented by the arithmetic mean of its members.
inline SpectrumPartition group_spectrum(const std::vector<double>& evals, double tol) {
  if (evals.empty()) throw ValidationError("group_spectrum: empty eigenvalue list");
  if (tol < 0.0) throw ValidationError("group_spectrum: tolerance must be >= 0");
  for (std::size_t i = 0; i + 1 < evals.size(); ++i) {
    if (evals[i] < evals[i + 1]) {
      throw ValidationError("group_spectrum: eigenvalues must be sorted descending");
    }
  }

  SpectrumPartition part;
  std::vector<std::size_t> cur{0};
  double sum = evals[0];
  for (std::size_t i = 1; i < evals.size(); ++i) {
    if (evals[i - 1] - evals[i] <= tol) {
      cur.push_back(i);
      sum += evals[i];
    } else {
      part.distinct.push_back(sum / static_cast<double>(cur.size()));
      part.classes.push_back(std::move(cur));
      cur = {i};
      sum = evals[i];
    }
  }
  part.distinct.push_back(sum / static_cast<double>(cur.size()));
  part.classes.push_back(std::move(cur));
  return part;
}

// Distinct eigenvalues of a hermitian matrix, descending.
inline std::vector<double> spectrum(const CMatrix& a) {
  const EigenDecomposition dec = eig_hermitian(a);
  return group_spectrum(dec.evals, default_grouping_tol(dec.evals)).distinct;
}

}  // namespace qpm
