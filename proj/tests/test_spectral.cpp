#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "qpm/spectral.hpp"
#include "test_support.hpp"

using namespace qpm;
using qpmtest::mat2;

namespace {

const CMatrix kZ = mat2({1, 0}, {0, 0}, {0, 0}, {-1, 0});
const CMatrix kX = mat2({0, 0}, {1, 0}, {1, 0}, {0, 0});

double recon_residual(const CMatrix& a, const EigenDecomposition& dec) {
  const std::size_t n = a.rows();
  std::vector<Complex> d(n * n, Complex(0, 0));
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = Complex(dec.evals[i], 0);
  const CMatrix lambda(n, n, std::move(d));
  return frobenius_distance(a, matmul(matmul(dec.u, lambda), adjoint(dec.u)));
}

void check_partition(const SpectrumPartition& part, std::size_t n) {
  std::set<std::size_t> seen;
  for (const auto& cls : part.classes) {
    for (std::size_t i : cls) {
      CHECK(i < n);
      CHECK(seen.insert(i).second);  // pairwise disjoint
    }
  }
  CHECK(seen.size() == n);  // union is everything
}

}  // namespace

TEST_CASE("eig of Z is the computational basis") {
  const EigenDecomposition dec = eig_hermitian(kZ);
  REQUIRE(dec.evals.size() == 2);
  CHECK(dec.evals[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dec.evals[1] == doctest::Approx(-1.0).epsilon(1e-14));
  // columns match e0, e1 up to phase
  CHECK(std::abs(dec.u(0, 0)) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(dec.u(1, 1)) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("eig of X gives the +-1 superposition basis") {
  const EigenDecomposition dec = eig_hermitian(kX);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(dec.evals[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dec.evals[1] == doctest::Approx(-1.0).epsilon(1e-14));

  // phase convention: first nonzero component real-positive
  CHECK(dec.u(0, 0).real() == doctest::Approx(r).epsilon(1e-12));
  CHECK(dec.u(1, 0).real() == doctest::Approx(r).epsilon(1e-12));
  CHECK(dec.u(0, 1).real() == doctest::Approx(r).epsilon(1e-12));
  CHECK(dec.u(1, 1).real() == doctest::Approx(-r).epsilon(1e-12));
  CHECK(recon_residual(kX, dec) < 1e-13);
}

TEST_CASE("eig of the rotated observable -(X+Z)/sqrt(2)") {
  const double r = 1.0 / std::sqrt(2.0);
  const CMatrix xpz = mat2({-r, 0}, {-r, 0}, {-r, 0}, {r, 0});
  const EigenDecomposition dec = eig_hermitian(xpz);
  CHECK(dec.evals[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dec.evals[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("eig rejects non-hermitian input") {
  const CMatrix a = mat2({0, 0}, {1, 0}, {0, 0}, {0, 0});
  CHECK_THROWS_WITH_AS(eig_hermitian(a), doctest::Contains("hermitian"),
                       ValidationError);
}

TEST_CASE("group_spectrum") {
  SUBCASE("exact duplicates") {
    const SpectrumPartition p = group_spectrum({1.0, 1.0, -1.0}, 1e-8);
    REQUIRE(p.distinct.size() == 2);
    CHECK(p.distinct[0] == 1.0);
    CHECK(p.distinct[1] == -1.0);
    CHECK(p.classes[0] == std::vector<std::size_t>{0, 1});
    CHECK(p.classes[1] == std::vector<std::size_t>{2});
  }
  SUBCASE("single eigenvalue") {
    const SpectrumPartition p = group_spectrum({0.25, 0.25}, 1e-8);
    REQUIRE(p.distinct.size() == 1);
    CHECK(p.distinct[0] == 0.25);
    CHECK(p.classes[0] == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("nearly split pair re-merges") {
    const SpectrumPartition p = group_spectrum({1.0, 1.0 - 5e-9, 0.3}, 1e-8);
    REQUIRE(p.distinct.size() == 2);
    CHECK(p.distinct[0] == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(p.distinct[1] == 0.3);
    CHECK(p.classes[0] == std::vector<std::size_t>{0, 1});
    CHECK(p.classes[1] == std::vector<std::size_t>{2});
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(group_spectrum({}, 1e-8), ValidationError);
    CHECK_THROWS_AS(group_spectrum({0.0, 1.0}, 1e-8), ValidationError);
    CHECK_THROWS_AS(group_spectrum({1.0}, -1.0), ValidationError);
  }
}

TEST_CASE("spectrum of canonical operators") {
  CHECK(spectrum(CMatrix::identity(2)) == std::vector<double>{1.0});

  const std::vector<double> zi = spectrum(tensor(kZ, CMatrix::identity(2)));
  REQUIRE(zi.size() == 2);
  CHECK(zi[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(zi[1] == doctest::Approx(-1.0).epsilon(1e-12));

  const std::vector<double> sx = spectrum(kX);
  REQUIRE(sx.size() == 2);
  CHECK(sx[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sx[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("random hermitian decompositions reconstruct and are unitary") {
  qpmtest::Rng rng(21);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + rng.index(7);
    const CMatrix a = qpmtest::random_hermitian(rng, n);
    const EigenDecomposition dec = eig_hermitian(a);

    CHECK(recon_residual(a, dec) <= 1e-10 * std::max(1.0, frobenius_norm(a)));
    CHECK(frobenius_distance(matmul(adjoint(dec.u), dec.u), CMatrix::identity(n)) <=
          1e-10 * static_cast<double>(n));
    CHECK(std::is_sorted(dec.evals.rbegin(), dec.evals.rend()));

    const SpectrumPartition part =
        group_spectrum(dec.evals, default_grouping_tol(dec.evals));
    check_partition(part, n);
  }
}

TEST_CASE("degenerate spectra recover their multiplicity structure") {
  qpmtest::Rng rng(22);
  for (int i = 0; i < 30; ++i) {
    // spectra like (3, 3, 3, -1, -1) with known multiplicities
    const std::size_t groups = 1 + rng.index(3);
    std::vector<double> d;
    std::vector<std::size_t> mult;
    double v = 3.0;
    for (std::size_t g = 0; g < groups; ++g) {
      const std::size_t m = 1 + rng.index(3);
      mult.push_back(m);
      for (std::size_t k = 0; k < m; ++k) d.push_back(v);
      v -= 2.0;
    }
    const CMatrix a = qpmtest::hermitian_with_spectrum(rng, d);
    const EigenDecomposition dec = eig_hermitian(a);
    const SpectrumPartition part =
        group_spectrum(dec.evals, default_grouping_tol(dec.evals));

    REQUIRE(part.distinct.size() == groups);
    for (std::size_t g = 0; g < groups; ++g) {
      CHECK(part.classes[g].size() == mult[g]);
      CHECK(part.distinct[g] == doctest::Approx(3.0 - 2.0 * g).epsilon(1e-10));
    }
    check_partition(part, d.size());
  }
}
