// detail/jacobi.hpp
// Cyclic Jacobi eigensolver for complex Hermitian matrices.
//
// Each step applies a unitary 2x2 rotation that annihilates one
// off-diagonal pair; the accumulated rotations form the eigenvector
// matrix. The routine operates on real diagonal values throughout, so
// the returned eigenvalues carry no imaginary part at all. Sized for
// the small (<= 8x8) operators this library works with.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace qpm::detail {

struct JacobiResult {
  std::vector<double> diag;                   // eigenvalues, unsorted
  std::vector<std::complex<double>> vectors;  // row-major accumulated unitary
  double off_norm = 0.0;                      // final off-diagonal Frobenius norm
  int sweeps = 0;
  bool converged = false;
};

// `a` is row-major n*n and assumed (nearly) Hermitian: the strict lower
// triangle is rebuilt from the conjugate of the upper one and diagonal
// imaginary parts are dropped, which symmetrizes the input exactly.
inline JacobiResult jacobi_hermitian(std::vector<std::complex<double>> a,
                                     std::size_t n,
                                     double rel_off_target = 1e-13,
                                     int max_sweeps = 100) {
  using C = std::complex<double>;

  JacobiResult res;
  res.vectors.assign(n * n, C(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    res.vectors[i * n + i] = C(1.0, 0.0);
  }

  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = C(a[i * n + i].real(), 0.0);
    for (std::size_t j = i + 1; j < n; ++j) {
      a[j * n + i] = std::conj(a[i * n + j]);
    }
  }

  double norm_a = 0.0;
  for (const C& z : a) norm_a += std::norm(z);
  norm_a = std::sqrt(norm_a);

  auto off_norm = [&a, n] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a[i * n + j]);
    }
    return std::sqrt(2.0 * s);
  };

  const double target = rel_off_target * norm_a;
  res.off_norm = off_norm();

  while (res.sweeps < max_sweeps && res.off_norm > target) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const C beta = a[p * n + q];
        const double m = std::abs(beta);
        if (m == 0.0) continue;

        // Factor the phase out of a_pq, then diagonalize the remaining
        // real symmetric 2x2 block with the classic stable rotation.
        const C phase = beta / m;  // e^{i phi}
        const double alpha = a[p * n + p].real();
        const double gamma = a[q * n + q].real();
        const double tau = (gamma - alpha) / (2.0 * m);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const C s_ph = s * std::conj(phase);
        const C c_ph = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const C akp = a[k * n + p];
          const C akq = a[k * n + q];
          a[k * n + p] = c * akp - s_ph * akq;
          a[k * n + q] = s * akp + c_ph * akq;
          a[p * n + k] = std::conj(a[k * n + p]);
          a[q * n + k] = std::conj(a[k * n + q]);
        }
        a[p * n + p] = C(c * c * alpha - 2.0 * c * s * m + s * s * gamma, 0.0);
        a[q * n + q] = C(s * s * alpha + 2.0 * c * s * m + c * c * gamma, 0.0);
        a[p * n + q] = C(0.0, 0.0);
        a[q * n + p] = C(0.0, 0.0);

        for (std::size_t k = 0; k < n; ++k) {
          const C ukp = res.vectors[k * n + p];
          const C ukq = res.vectors[k * n + q];
          res.vectors[k * n + p] = c * ukp - s_ph * ukq;
          res.vectors[k * n + q] = s * ukp + c_ph * ukq;
        }
      }
    }
    ++res.sweeps;
    res.off_norm = off_norm();
  }

  res.converged = res.off_norm <= target;
  res.diag.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.diag[i] = a[i * n + i].real();
  return res;
}

}  // namespace qpm::detail
