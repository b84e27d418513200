// measurement.hpp
// Projective (von Neumann) measurements: the validity predicate, outcome
// probabilities, post-measurement collapse, and the observable ->
// measurement construction with its inverse reconstruction.
//
// Outcomes are ordered by descending eigenvalue, a deterministic choice
// that makes golden-file tests possible; downstream quantities depend only
// on traces and are unaffected.

#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "qpm/complex_matrix.hpp"
#include "qpm/errors.hpp"
#include "qpm/spectral.hpp"
#include "qpm/states.hpp"

namespace qpm {

// One clause per predicate of the measurement validity check.
enum class PmClause { Distinctness, Dimension, Projector, Orthogonality, Completeness };

class PmValidationError : public ValidationError {
 public:
  PmValidationError(PmClause clause, const std::string& what)
      : ValidationError(what), clause_(clause) {}
  PmClause clause() const { return clause_; }

 private:
  PmClause clause_;
};

// Outcome value paired with the projector onto its eigenspace.
struct MeasureOutcome {
  double value;
  CMatrix proj;
};

// A complete orthogonal family of projectors with pairwise distinct
// outcome values. Instances exist only through validate_pm, so holding
// one is proof the family passed every clause.
class ProjectiveMeasurement {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::vector<MeasureOutcome>& outcomes() const { return outcomes_; }
  const MeasureOutcome& operator[](std::size_t i) const { return outcomes_[i]; }

  friend ProjectiveMeasurement validate_pm(std::size_t dim,
                                           std::vector<MeasureOutcome> outcomes);

 private:
  ProjectiveMeasurement(std::size_t dim, std::vector<MeasureOutcome> outcomes)
      : dim_(dim), outcomes_(std::move(outcomes)) {}

  std::size_t dim_;
  std::vector<MeasureOutcome> outcomes_;
};

// Checks, in order: value distinctness, projector dimensions, each
// projector orthogonal (hermitian + idempotent), pairwise orthogonality,
// completeness. Throws PmValidationError naming the first violated clause.
inline ProjectiveMeasurement validate_pm(std::size_t dim,
                                         std::vector<MeasureOutcome> outcomes) {
  if (dim == 0) {
    throw PmValidationError(PmClause::Dimension, "measurement dimension must be >= 1");
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
      if (outcomes[i].value == outcomes[j].value) {
        throw PmValidationError(PmClause::Distinctness,
                                "duplicate outcome value " +
                                    std::to_string(outcomes[i].value) + " at indices " +
                                    std::to_string(i) + " and " + std::to_string(j));
      }
    }
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const CMatrix& p = outcomes[i].proj;
    if (p.rows() != dim || p.cols() != dim) {
      throw PmValidationError(PmClause::Dimension,
                              "outcome " + std::to_string(i) + " projector is " +
                                  p.shape() + ", expected " +
                                  detail::shape_str(dim, dim));
    }
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const MatrixClass cls = classify(outcomes[i].proj, kDefaultTol);
    if (!cls.projector) {
      const double res = frobenius_distance(
          matmul(outcomes[i].proj, outcomes[i].proj), outcomes[i].proj);
      throw PmValidationError(PmClause::Projector,
                              "outcome " + std::to_string(i) +
                                  " is not an orthogonal projector (hermitian: " +
                                  (cls.hermitian ? "yes" : "no") +
                                  ", ||P^2 - P||_F = " + std::to_string(res) + ")");
    }
  }

  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
      const double res = frobenius_norm(matmul(outcomes[i].proj, outcomes[j].proj));
      if (res > kDefaultTol) {
        throw PmValidationError(PmClause::Orthogonality,
                                "projectors " + std::to_string(i) + " and " +
                                    std::to_string(j) + " overlap, ||Pi*Pj||_F = " +
                                    std::to_string(res));
      }
    }
  }

  CMatrix sum = CMatrix::zero(dim, dim);
  for (const MeasureOutcome& o : outcomes) sum = sum + o.proj;
  const double res = frobenius_distance(sum, CMatrix::identity(dim));
  if (res > kDefaultTol) {
    throw PmValidationError(PmClause::Completeness,
                            "projectors do not sum to the identity, residual " +
                                std::to_string(res));
  }

  return ProjectiveMeasurement(dim, std::move(outcomes));
}

// P(outcome i) = Re tr(rho * P_i), clamped to [0,1] against roundoff.
// Residuals beyond the clamping window are treated as integrity failures.
inline double outcome_prob(const DensityOperator& rho, const ProjectiveMeasurement& m,
                           std::size_t i) {
  if (i >= m.size()) {
    throw DimensionError("outcome index " + std::to_string(i) + " out of range, " +
                         std::to_string(m.size()) + " outcomes");
  }
  if (rho.dim() != m.dim()) {
    throw DimensionError("outcome_prob dimension mismatch: state " +
                         std::to_string(rho.dim()) + ", measurement " +
                         std::to_string(m.dim()));
  }
  const Complex t = trace(matmul(rho.mat(), m[i].proj));
  if (std::abs(t.imag()) > 1e-10) {
    throw NumericalError("outcome probability has imaginary part " +
                         std::to_string(t.imag()));
  }
  double p = t.real();
  if (p < 0.0) {
    if (p < -1e-12) {
      throw NumericalError("outcome probability " + std::to_string(p) +
                           " below clamping window");
    }
    p = 0.0;
  } else if (p > 1.0) {
    if (p > 1.0 + 1e-12) {
      throw NumericalError("outcome probability " + std::to_string(p) +
                           " above clamping window");
    }
    p = 1.0;
  }
  return p;
}

// Post-measurement state: P rho P / tr(rho P), or the maximally mixed
// state when the outcome has probability zero (|tr| <= 1e-12).
inline DensityOperator collapse(const DensityOperator& rho, const CMatrix& p) {
  if (!p.square() || p.rows() != rho.dim()) {
    throw DimensionError("collapse: projector shape " + p.shape() +
                         " does not match state dimension " + std::to_string(rho.dim()));
  }
  if (!classify(p, kDefaultTol).projector) {
    throw ValidationError("collapse: operator is not an orthogonal projector");
  }
  const Complex t = trace(matmul(rho.mat(), p));
  if (std::abs(t) <= 1e-12) {
    return max_mixed(rho.dim());
  }
  if (std::abs(t.imag()) > 1e-10) {
    throw NumericalError("collapse probability has imaginary part " +
                         std::to_string(t.imag()));
  }
  return DensityOperator((1.0 / t.real()) * matmul(matmul(p, rho.mat()), p));
}

// Spectral construction of the measurement for an observable: group the
// eigenvalues, sum the rank-1 projections of each class's eigenvectors,
// order outcomes by descending eigenvalue. The result is re-validated.
inline ProjectiveMeasurement make_pm(const CMatrix& a) {
  if (!a.square()) {
    throw DimensionError("make_pm requires a square matrix, got " + a.shape());
  }
  if (!classify(a).hermitian) {
    throw ValidationError("make_pm: observable is not hermitian within tolerance");
  }

  const EigenDecomposition dec = eig_hermitian(a);
  const SpectrumPartition part =
      group_spectrum(dec.evals, default_grouping_tol(dec.evals));

  std::vector<MeasureOutcome> outcomes;
  outcomes.reserve(part.distinct.size());
  for (std::size_t k = 0; k < part.distinct.size(); ++k) {
    CMatrix proj = CMatrix::zero(a.rows(), a.rows());
    for (std::size_t j : part.classes[k]) {
      proj = proj + rank1proj(column(dec.u, j));
    }
    outcomes.push_back(MeasureOutcome{part.distinct[k], std::move(proj)});
  }

  try {
    return validate_pm(a.rows(), std::move(outcomes));
  } catch (const ValidationError& e) {
    throw NumericalError(std::string("make_pm: constructed measurement failed "
                                     "validation: ") +
                         e.what());
  }
}

// sum_i value_i * P_i; inverse of make_pm up to numerical residuals.
inline CMatrix reconstruct(const ProjectiveMeasurement& m) {
  CMatrix acc = CMatrix::zero(m.dim(), m.dim());
  for (const MeasureOutcome& o : m.outcomes()) {
    acc = acc + o.value * o.proj;
  }
  return acc;
}

// <A>_rho = Re tr(A rho) for a hermitian observable.
inline double expectation_value(const CMatrix& a, const DensityOperator& rho) {
  if (!a.square() || a.rows() != rho.dim()) {
    throw DimensionError("expectation_value: observable shape " + a.shape() +
                         " does not match state dimension " + std::to_string(rho.dim()));
  }
  if (!classify(a).hermitian) {
    throw ValidationError("expectation_value: observable is not hermitian");
  }
  const Complex t = trace(matmul(a, rho.mat()));
  if (std::abs(t.imag()) > 1e-10) {
    throw NumericalError("expectation value has imaginary part " +
                         std::to_string(t.imag()));
  }
  return t.real();
}

}  // namespace qpm
