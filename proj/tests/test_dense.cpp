#include <doctest.h>

#include <cstdlib>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "helpers.hpp"
#include "mgc/dense.hpp"

using namespace mgc;

namespace {

double diff(const DenseMatrix& a, const DenseMatrix& b) { return (a - b).norm(); }

RealMatrix random_antisymmetric(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  RealMatrix k = RealMatrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      k(i, j) = g(rng);
      k(j, i) = -k(i, j);
    }
  return k;
}

}  // namespace

TEST_CASE("Jordan-Wigner Majoranas") {
  DenseMatrix x(2, 2), y(2, 2);
  x << 0, 1, 1, 0;
  y << 0, cplx(0, -1), cplx(0, 1), 0;
  CHECK(diff(jw_gamma(1, 1), x) == 0.0);
  CHECK(diff(jw_gamma(2, 1), y) == 0.0);
  for (int mu = 1; mu <= 4; ++mu)
    for (int nu = 1; nu <= 4; ++nu) {
      DenseMatrix a = jw_gamma(mu, 2), b = jw_gamma(nu, 2);
      DenseMatrix want = DenseMatrix::Identity(4, 4) * (mu == nu ? 2.0 : 0.0);
      CHECK(diff(a * b + b * a, want) < 1e-14);
    }
  CHECK_THROWS(jw_gamma(5, 2));
  CHECK_THROWS(jw_gamma(0, 2));
}

TEST_CASE("Gaussian unitaries") {
  GaussianGenerator zero{RealMatrix::Zero(2, 2)};
  CHECK(diff(gaussian_unitary(zero, 1), DenseMatrix::Identity(2, 2)) < 1e-14);

  double theta = 0.7;
  GaussianGenerator g{RealMatrix::Zero(2, 2)};
  g.kmat(0, 1) = theta;
  g.kmat(1, 0) = -theta;
  RealMatrix q = induced_orthogonal(gaussian_unitary(g, 1), 1);
  RealMatrix want(2, 2);
  want << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  CHECK((q - want).norm() < 1e-12);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 5; ++rep) {
    GaussianGenerator r{random_antisymmetric(4, rng)};
    DenseMatrix u = gaussian_unitary(r, 2);
    RealMatrix qe = r.kmat.exp();
    for (int mu = 1; mu <= 4; ++mu) {
      DenseMatrix lhs = u * jw_gamma(mu, 2) * u.adjoint();
      DenseMatrix rhs = DenseMatrix::Zero(4, 4);
      for (int nu = 1; nu <= 4; ++nu) rhs += qe(nu - 1, mu - 1) * jw_gamma(nu, 2);
      CHECK(diff(lhs, rhs) < 1e-8);
    }
    GaussianGenerator neg{-r.kmat};
    CHECK(diff(u * gaussian_unitary(neg, 2), DenseMatrix::Identity(4, 4)) < 1e-8);
  }

  GaussianGenerator bad{RealMatrix::Identity(2, 2)};
  CHECK_THROWS(gaussian_unitary(bad, 1));
}

TEST_CASE("reflection") {
  DenseMatrix x = reflection_unitary(1);
  CHECK(diff(x * jw_gamma(1, 1) * x.adjoint(), jw_gamma(1, 1)) < 1e-14);
  CHECK(diff(x * jw_gamma(2, 1) * x.adjoint(), -jw_gamma(2, 1)) < 1e-14);
  for (int n = 1; n <= 2; ++n) {
    RealMatrix q = induced_orthogonal(reflection_unitary(n), n);
    CHECK(std::abs(q.determinant() + 1.0) < 1e-12);
    CHECK((q - reflection_orthogonal(n)).norm() < 1e-12);
    DenseMatrix r2 = reflection_unitary(n) * reflection_unitary(n);
    RealMatrix q2 = induced_orthogonal(r2, n);
    CHECK((q2 - RealMatrix::Identity(2 * n, 2 * n)).norm() < 1e-12);
  }
}

TEST_CASE("unitary synthesis from an orthogonal matrix") {
  std::mt19937_64 rng(8);
  for (int n = 1; n <= 3; ++n)
    for (int rep = 0; rep < 6; ++rep) {
      auto s = random_orthogonal(n, rng);
      DenseMatrix u = unitary_from_orthogonal(s.q, n);
      CHECK((induced_orthogonal(u, n) - s.q).norm() < 1e-10);
      // the generator route gives the same adjoint action
      CHECK((induced_orthogonal(sample_unitary(s, n), n) - s.q).norm() < 1e-8);
    }
  // signed permutations with repeated -1 pivots
  RealMatrix m = -RealMatrix::Identity(4, 4);
  CHECK((induced_orthogonal(unitary_from_orthogonal(m, 2), 2) - m).norm() < 1e-12);
}

TEST_CASE("Haar sampling on O(2n)") {
  auto a = random_orthogonal(2, std::uint64_t{99});
  auto b = random_orthogonal(2, std::uint64_t{99});
  CHECK(a.q == b.q);
  CHECK(a.reflected == b.reflected);

  std::mt19937_64 rng(1234);
  const int draws = 10000;
  for (int n = 1; n <= 2; ++n) {
    double mean = 0, second = 0, second_sq = 0;
    int reflected = 0;
    for (int s = 0; s < draws; ++s) {
      auto o = random_orthogonal(n, rng);
      mean += o.q(0, 0);
      second += o.q(0, 0) * o.q(0, 0);
      second_sq += std::pow(o.q(0, 0), 4);
      reflected += o.reflected;
      CHECK(std::abs(o.q.determinant() - (o.reflected ? -1.0 : 1.0)) < 1e-10);
    }
    mean /= draws;
    second /= draws;
    double var = second_sq / draws - second * second;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(draws));
    CHECK(std::abs(second - 1.0 / (2 * n)) < 3 * std::sqrt(var / draws));
    CHECK(std::abs(reflected - draws / 2) < 4 * std::sqrt(draws / 4.0));
  }
}

TEST_CASE("Monte-Carlo twirl") {
  DenseMatrix id = DenseMatrix::Identity(4, 4);
  auto t = mc_twirl(id, 1, 2, 50, 1);
  CHECK(diff(t.mean, id) < 1e-10);

  // twirling an already twirled operator changes it by a few standard errors
  DenseMatrix vac = DenseMatrix::Zero(4, 4);
  vac(0, 0) = 1;
  auto once = mc_twirl(vac, 1, 2, 4000, 2);
  auto twice = mc_twirl(once.mean, 1, 2, 4000, 3);
  CHECK(diff(once.mean, twice.mean) <= 3 * (once.stderr_frobenius + twice.stderr_frobenius));
  CHECK_THROWS_AS(mc_twirl(DenseMatrix::Identity(8, 8), 1, 2, 10, 1), DimensionError);
}

TEST_CASE("commutator residuals") {
  std::mt19937_64 rng(6);
  auto s = random_orthogonal(1, rng);
  CHECK(commutator_residual(OperatorExpansion::identity(1, 2), s.q, 1, 2) < 1e-12);

  OperatorExpansion plain(1, 2);
  plain += OperatorExpansion::single(1, 2, {1, 1});
  plain += OperatorExpansion::single(1, 2, {2, 2});
  auto rot = random_orthogonal_component(1, false, rng);
  CHECK(commutator_residual(plain, rot.q, 1, 2) < 1e-8);

  auto g1 = OperatorExpansion::single(1, 2, {1, 0});
  RealMatrix q(2, 2);
  q << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  CHECK(commutator_residual(g1, q, 1, 2) > 0.1);
}

TEST_CASE("capacity gate") {
  CHECK_THROWS_AS(to_dense(OperatorExpansion::identity(3, 5)), CapacityError);
  setenv("MGC_MAX_DENSE_DIM", "16", 1);
  CHECK_THROWS_AS(to_dense(OperatorExpansion::identity(1, 5)), CapacityError);
  CHECK_NOTHROW(to_dense(OperatorExpansion::identity(1, 4)));
  unsetenv("MGC_MAX_DENSE_DIM");
  CHECK(max_dense_dim() == 4096);
}
