// chsh.hpp
// The CHSH experiment on both sides of the divide: quantum correlations of
// the four canonical observables against a Bell state, and finite local
// hidden-variable models with per-observable response random variables.
//
// A hidden-variable model is a finite probability space plus, per side and
// per observable, a response table giving the probability of each outcome
// conditional on the sample. Constraints on responses apply only to
// samples of strictly positive weight (the finite reading of "almost
// everywhere": the null set is exactly the zero-weight samples).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "qpm/complex_matrix.hpp"
#include "qpm/detail/rng.hpp"
#include "qpm/errors.hpp"
#include "qpm/measurement.hpp"
#include "qpm/states.hpp"

namespace qpm {

// ---------------------------------------------------------------------------
// Quantum side
// ---------------------------------------------------------------------------

// The 2x2 observables Z, X, XpZ = -(X+Z)/sqrt(2), ZmX = (Z-X)/sqrt(2) and
// their one-sided tensor extensions. All eight are hermitian, unitary, and
// have spectrum {1, -1}.
struct ChshObservables {
  CMatrix z;
  CMatrix x;
  CMatrix xpz;
  CMatrix zmx;
  CMatrix zi;
  CMatrix xi;
  CMatrix ixpz;
  CMatrix izmx;
};

inline ChshObservables canonical_observables() {
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix z(2, 2, {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0)});
  const CMatrix x(2, 2, {Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)});
  const CMatrix xpz(2, 2, {Complex(-r, 0), Complex(-r, 0), Complex(-r, 0), Complex(r, 0)});
  const CMatrix zmx(2, 2, {Complex(r, 0), Complex(-r, 0), Complex(-r, 0), Complex(-r, 0)});
  const CMatrix eye = CMatrix::identity(2);
  return ChshObservables{z,
                         x,
                         xpz,
                         zmx,
                         tensor(z, eye),
                         tensor(x, eye),
                         tensor(eye, xpz),
                         tensor(eye, zmx)};
}

// E(A, B) = Re tr(A * B * rho) for commuting separated measurements.
inline double quantum_correlation(const CMatrix& a, const CMatrix& b,
                                  const DensityOperator& rho) {
  if (!a.square() || !b.square() || a.rows() != rho.dim() || b.rows() != rho.dim()) {
    throw DimensionError("quantum_correlation shape mismatch: " + a.shape() + ", " +
                         b.shape() + ", state dimension " + std::to_string(rho.dim()));
  }
  if (!classify(a).hermitian || !classify(b).hermitian) {
    throw ValidationError("quantum_correlation: observables must be hermitian");
  }
  const Complex t = trace(matmul(matmul(a, b), rho.mat()));
  if (std::abs(t.imag()) > 1e-10) {
    throw NumericalError("correlation has imaginary part " + std::to_string(t.imag()));
  }
  return t.real();
}

// The four correlations against the canonical observables and the CHSH
// combination s = xi_ixpz + zi_ixpz + xi_izmx - zi_izmx.
struct CorrelationReport {
  double zi_ixpz;
  double xi_ixpz;
  double xi_izmx;
  double zi_izmx;
  double s;
};

inline CorrelationReport chsh_quantum(const DensityOperator& rho) {
  if (rho.dim() != 4) {
    throw DimensionError("chsh_quantum expects a two-qubit state, got dimension " +
                         std::to_string(rho.dim()));
  }
  const ChshObservables obs = canonical_observables();
  CorrelationReport r{};
  r.zi_ixpz = quantum_correlation(obs.zi, obs.ixpz, rho);
  r.xi_ixpz = quantum_correlation(obs.xi, obs.ixpz, rho);
  r.xi_izmx = quantum_correlation(obs.xi, obs.izmx, rho);
  r.zi_izmx = quantum_correlation(obs.zi, obs.izmx, rho);
  r.s = r.xi_ixpz + r.zi_ixpz + r.xi_izmx - r.zi_izmx;
  return r;
}

// ---------------------------------------------------------------------------
// Local hidden-variable side
// ---------------------------------------------------------------------------

enum class LhvClause { WeightNegative, WeightSum, TableShape, ResponseNegative, ResponseSum };

class LhvValidationError : public ValidationError {
 public:
  LhvValidationError(LhvClause clause, const std::string& what)
      : ValidationError(what), clause_(clause) {}
  LhvClause clause() const { return clause_; }

 private:
  LhvClause clause_;
};

// rows[k][sample] is the response for outcome spectrum[k] given the sample.
struct ResponseTable {
  std::vector<double> spectrum;
  std::vector<std::vector<double>> rows;
};

// Finite probability space with one response table per side.
struct LhvModel {
  std::vector<double> weights;
  ResponseTable x;
  ResponseTable y;

  std::size_t sample_count() const { return weights.size(); }
};

namespace detail {

inline void check_table(const ResponseTable& t, std::size_t samples,
                        const std::vector<double>& weights, const char* side) {
  if (t.rows.size() != t.spectrum.size()) {
    throw LhvValidationError(LhvClause::TableShape,
                             std::string(side) + " table has " +
                                 std::to_string(t.rows.size()) + " rows for " +
                                 std::to_string(t.spectrum.size()) + " spectrum values");
  }
  for (const auto& row : t.rows) {
    if (row.size() != samples) {
      throw LhvValidationError(LhvClause::TableShape,
                               std::string(side) + " response row has " +
                                   std::to_string(row.size()) + " entries for " +
                                   std::to_string(samples) + " samples");
    }
  }
  for (std::size_t w = 0; w < samples; ++w) {
    if (weights[w] <= 0.0) continue;  // null samples are unconstrained
    double sum = 0.0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
      const double r = t.rows[k][w];
      if (r < 0.0) {
        throw LhvValidationError(LhvClause::ResponseNegative,
                                 std::string(side) + " response " + std::to_string(r) +
                                     " < 0 on positive-weight sample " +
                                     std::to_string(w));
      }
      sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw LhvValidationError(LhvClause::ResponseSum,
                               std::string(side) + " responses sum to " +
                                   std::to_string(sum) + " on sample " +
                                   std::to_string(w) + ", expected 1");
    }
  }
}

}  // namespace detail

// Checks all model invariants; throws LhvValidationError naming the first
// violated clause, otherwise returns its argument.
inline const LhvModel& lhv_validate(const LhvModel& m) {
  if (m.weights.empty()) {
    throw LhvValidationError(LhvClause::WeightSum, "sample space is empty");
  }
  double sum = 0.0;
  for (std::size_t w = 0; w < m.weights.size(); ++w) {
    if (m.weights[w] < 0.0) {
      throw LhvValidationError(LhvClause::WeightNegative,
                               "weight " + std::to_string(m.weights[w]) +
                                   " at sample " + std::to_string(w));
    }
    sum += m.weights[w];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw LhvValidationError(LhvClause::WeightSum, "weights sum to " +
                                                       std::to_string(sum) +
                                                       ", expected 1");
  }
  detail::check_table(m.x, m.sample_count(), m.weights, "x");
  detail::check_table(m.y, m.sample_count(), m.weights, "y");
  return m;
}

// E[f] = sum_w weights[w] * f(w).
template <class F>
double lhv_expectation(const LhvModel& m, F&& f) {
  double e = 0.0;
  for (std::size_t w = 0; w < m.weights.size(); ++w) {
    e += m.weights[w] * f(w);
  }
  return e;
}

// The per-sample random variable of an observable's expectation:
// sum_a a * X_a(sample).
inline double qt_expect_rv(const ResponseTable& t, std::size_t sample) {
  double v = 0.0;
  for (std::size_t k = 0; k < t.spectrum.size(); ++k) {
    if (sample >= t.rows[k].size()) {
      throw DimensionError("qt_expect_rv: sample index " + std::to_string(sample) +
                           " out of range");
    }
    v += t.spectrum[k] * t.rows[k][sample];
  }
  return v;
}

struct BilinearCheck {
  double lhs;  // E[(sum_a a X_a)(sum_b b Y_b)] over the model
  double rhs;  // sum_{a,b} a b E[X_a Y_b]
};

// Both sides of the expectation bilinearity identity, computed
// independently of each other.
inline BilinearCheck sum_qt_expect_identity(const LhvModel& m) {
  lhv_validate(m);
  BilinearCheck r{};
  r.lhs = lhv_expectation(
      m, [&m](std::size_t w) { return qt_expect_rv(m.x, w) * qt_expect_rv(m.y, w); });
  r.rhs = 0.0;
  for (std::size_t a = 0; a < m.x.spectrum.size(); ++a) {
    for (std::size_t b = 0; b < m.y.spectrum.size(); ++b) {
      const double e = lhv_expectation(
          m, [&m, a, b](std::size_t w) { return m.x.rows[a][w] * m.y.rows[b][w]; });
      r.rhs += m.x.spectrum[a] * m.y.spectrum[b] * e;
    }
  }
  return r;
}

// S = E[A1 B0] + E[A0 B1] + E[A1 B1] - E[A0 B0] where A_i, B_j are the
// expectation random variables of the four response tables over a shared
// sample space. Each pairing must form a valid model.
inline double chsh_classical(const ResponseTable& a0, const ResponseTable& a1,
                             const ResponseTable& b0, const ResponseTable& b1,
                             const std::vector<double>& weights) {
  lhv_validate(LhvModel{weights, a1, b0});
  lhv_validate(LhvModel{weights, a0, b1});
  lhv_validate(LhvModel{weights, a1, b1});
  lhv_validate(LhvModel{weights, a0, b0});

  auto corr = [&weights](const ResponseTable& a, const ResponseTable& b) {
    double e = 0.0;
    for (std::size_t w = 0; w < weights.size(); ++w) {
      e += weights[w] * qt_expect_rv(a, w) * qt_expect_rv(b, w);
    }
    return e;
  };
  return corr(a1, b0) + corr(a0, b1) + corr(a1, b1) - corr(a0, b0);
}

// Exhaustive maximum of |S| over the 16 deterministic sign strategies,
// in exact integer arithmetic. Always 2.
inline double max_deterministic_chsh() {
  int best = 0;
  for (int a0 = -1; a0 <= 1; a0 += 2) {
    for (int a1 = -1; a1 <= 1; a1 += 2) {
      for (int b0 = -1; b0 <= 1; b0 += 2) {
        for (int b1 = -1; b1 <= 1; b1 += 2) {
          const int s = a1 * b0 + a0 * b1 + a1 * b1 - a0 * b0;
          best = std::max(best, std::abs(s));
        }
      }
    }
  }
  return static_cast<double>(best);
}

namespace detail {

// One random valid model with +-1 spectra: sample-space size uniform on
// 1..16, weights and response rows drawn as normalized uniform positives.
// The stream depends only on (seed, trial), so any partition of trials
// across workers reproduces the same models.
inline double lhv_trial(std::uint64_t seed, std::uint64_t trial) {
  SplitMix64 g = SplitMix64::stream(seed, trial);
  const std::size_t samples = 1 + static_cast<std::size_t>(g.next() % 16);

  std::vector<double> weights(samples);
  double wsum = 0.0;
  for (double& w : weights) {
    w = g.uniform_pos();
    wsum += w;
  }
  for (double& w : weights) w /= wsum;

  auto random_table = [&g, samples] {
    ResponseTable t;
    t.spectrum = {1.0, -1.0};
    t.rows.assign(2, std::vector<double>(samples));
    for (std::size_t w = 0; w < samples; ++w) {
      const double u0 = g.uniform_pos();
      const double u1 = g.uniform_pos();
      t.rows[0][w] = u0 / (u0 + u1);
      t.rows[1][w] = u1 / (u0 + u1);
    }
    return t;
  };
  const ResponseTable a0 = random_table();
  const ResponseTable a1 = random_table();
  const ResponseTable b0 = random_table();
  const ResponseTable b1 = random_table();
  return chsh_classical(a0, a1, b0, b1, weights);
}

}  // namespace detail

// Maximum |S| over `trials` random valid models. Deterministic for a fixed
// seed and independent of the worker count: trials are indexed globally
// and reduce by max.
inline double monte_carlo_lhv(std::uint64_t trials, std::uint64_t seed,
                              unsigned workers = 1) {
  if (trials == 0) throw ValidationError("monte_carlo_lhv: trials must be >= 1");
  if (workers == 0) workers = 1;

  auto run_range = [seed](std::uint64_t lo, std::uint64_t hi) {
    double best = 0.0;
    for (std::uint64_t t = lo; t < hi; ++t) {
      best = std::max(best, std::abs(detail::lhv_trial(seed, t)));
    }
    return best;
  };

  if (workers == 1 || trials < 2 * workers) {
    return run_range(0, trials);
  }

  std::vector<double> maxima(workers, 0.0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t lo = static_cast<std::uint64_t>(w) * chunk;
    const std::uint64_t hi = std::min(trials, lo + chunk);
    pool.emplace_back([&maxima, &run_range, w, lo, hi] { maxima[w] = run_range(lo, hi); });
  }
  for (std::thread& th : pool) th.join();
  return *std::max_element(maxima.begin(), maxima.end());
}

// ---------------------------------------------------------------------------
// Witness
// ---------------------------------------------------------------------------

struct WitnessReport {
  CorrelationReport correlations;
  double classical_bound;  // exact deterministic maximum
  double margin;           // |s| - classical_bound
  bool violated;
};

inline WitnessReport witness_report(const DensityOperator& rho) {
  const CorrelationReport r = chsh_quantum(rho);
  const double bound = max_deterministic_chsh();
  WitnessReport w{r, bound, std::abs(r.s) - bound, std::abs(r.s) > bound};
  return w;
}

// The canonical contradiction: the singlet state's CHSH value 2*sqrt(2)
// against the provable bound 2 for any finite hidden-variable model.
inline WitnessReport no_lhv_witness() {
  const DensityOperator rho_c(rank1proj(bell_state(BellKind::PsiMinus)));
  const WitnessReport w = witness_report(rho_c);
  const double expected = 2.0 * std::sqrt(2.0);
  if (std::abs(w.correlations.s - expected) > 1e-9) {
    throw NumericalError("no_lhv_witness: quantum CHSH value " +
                         std::to_string(w.correlations.s) + " differs from 2*sqrt(2)");
  }
  if (w.classical_bound != 2.0) {
    throw NumericalError("no_lhv_witness: deterministic bound is not exactly 2");
  }
  return w;
}

}  // namespace qpm
