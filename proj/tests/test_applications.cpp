#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "mgc/applications.hpp"
#include "mgc/clifford_matchgate.hpp"
#include "mgc/dense.hpp"

using namespace mgc;

namespace {

StateVec basis_state(int n, std::size_t index) {
  StateVec v = StateVec::Zero(std::size_t{1} << n);
  v(index) = 1;
  return v;
}

StateVec random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  StateVec v(std::size_t{1} << n);
  for (auto& a : v) a = {g(rng), g(rng)};
  return v / v.norm();
}

StateVec gaussian_state(int n, std::mt19937_64& rng) {
  return sample_unitary(random_orthogonal(n, rng), n) * basis_state(n, 0);
}

bool within_sigma(const McEstimate& e, double exact, double sigmas) {
  return std::abs(e.value - exact) <= sigmas * e.stderr_ + 1e-12;
}

}  // namespace

TEST_CASE("vacuum projector and its trace") {
  for (int k = 2; k <= 6; ++k) CHECK(vacuum_trace_exact(1, k) == 2);
  CHECK(vacuum_trace_exact(2, 4) == 10);
  CHECK(vacuum_trace_exact(2, 2) == 6);
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto p = vacuum_projector(n, k);
      CHECK(std::real(op_trace(p)) == doctest::Approx(vacuum_trace(n, k)).epsilon(1e-12));
      CHECK(vacuum_trace_exact(n, k) == BigRational(sector_multiplicity({k, std::vector<int>(k / 2, 0)}, n)));
      CHECK(max_coeff_diff(op_multiply(p, p), p) < 1e-10);
      for (int a = 1; a <= k; ++a)
        for (int b = a + 1; b <= k; ++b) CHECK(op_multiply(bridge_operator(a, b, n, k), p).max_abs() < 1e-10);
    }
  // trace formula alone reaches far beyond the operator form
  CHECK(vacuum_trace_exact(3, 4) == BigRational(sector_multiplicity({4, {0, 0}}, 3)));
  CHECK(vacuum_trace_exact(4, 6) == BigRational(sector_multiplicity({6, {0, 0, 0}}, 4)));
  CHECK_THROWS(vacuum_projector(1, 1));
}

TEST_CASE("matchgate twirl") {
  std::mt19937_64 rng(31);
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto basis = gt_basis(n, k);
      auto vac = matchgate_twirl(vacuum_state(n, k), basis);
      auto p0 = vacuum_projector(n, k);
      double tr = vacuum_trace(n, k);
      CHECK(max_coeff_diff(vac, (1.0 / tr) * p0) < 1e-8);
      CHECK(std::real(hs_inner(vac, vac)) == doctest::Approx(1.0 / tr).epsilon(1e-9));
      CHECK(to_double(BigRational(1) / vacuum_trace_exact(n, k)) ==
            doctest::Approx(to_double(state_frame_potential_closed(n, k, Ensemble::Matchgate))));

      auto w = testing::hermitian_part(testing::random_operator(n, k, 12, rng));
      auto t = matchgate_twirl(w, basis);
      CHECK(max_coeff_diff(matchgate_twirl(t, basis), t) < 1e-8);
      CHECK(std::abs(op_trace(t) - op_trace(w)) < 1e-9);
      CHECK(max_coeff_diff(op_adjoint(t), t) < 1e-10);
      // the residual is orthogonal to the commutant, so it twirls to zero
      auto resid = w - t;
      CHECK(matchgate_twirl(resid, basis).max_abs() < 1e-8);
      CHECK(std::abs(op_trace(resid)) < 1e-9);
    }
  // against the dense Monte-Carlo average
  auto w = testing::hermitian_part(testing::random_operator(1, 2, 6, rng));
  auto mc = mc_twirl(to_dense(w), 1, 2, 4000, 5);
  double err = (mc.mean - to_dense(matchgate_twirl(w))).norm();
  CHECK(err <= 4 * mc.stderr_frobenius + 1e-12);
}

TEST_CASE("unitary frame potential") {
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= 5; ++k)
      CHECK(unitary_frame_potential_rmt(n, k) == BigRational(unitary_frame_potential_closed(n, k)));
  CHECK(unitary_frame_potential_rmt(1, 2) == 3);
  CHECK(unitary_frame_potential_rmt(1, 4) == 35);
  for (int n = 1; n <= 5; ++n) CHECK(unitary_frame_potential_closed(n, 2) == 2 * n + 1);

  auto e = unitary_frame_potential_mc(1, 2, 10000, 1);
  CHECK(e.samples == 10000);
  CHECK(e.stderr_ > 0);
  CHECK(within_sigma(e, 3.0, 4));
  for (int k = 1; k <= 4; ++k) {
    auto e2 = unitary_frame_potential_mc(2, k, 4000, 10 + k);
    CHECK(within_sigma(e2, to_double(unitary_frame_potential_closed(2, k)), 4));
  }
}

TEST_CASE("state frame potentials") {
  for (int k = 1; k <= 8; ++k) CHECK(state_frame_potential_closed(1, k, Ensemble::Matchgate) == BigRational(1, 2));
  CHECK(state_frame_potential_closed(2, 4, Ensemble::Matchgate) == BigRational(1, 10));
  CHECK(state_frame_potential_closed(1, 2, Ensemble::CliffordMatchgate) == BigRational(1, 2));
  CHECK(state_frame_potential_closed(2, 4, Ensemble::CliffordMatchgate) == BigRational(10, 96));
  for (int n = 1; n <= 8; ++n)
    for (int k = 2; k <= 10; ++k) {
      double exact = to_double(state_frame_potential_closed(n, k, Ensemble::Matchgate));
      CHECK(std::abs(state_frame_potential_selberg(n, k) - exact) <= 1e-12 * exact);
    }
  // k = 2, 3 share the matchgate commutant
  for (int n = 1; n <= 5; ++n)
    for (int k = 2; k <= 3; ++k)
      CHECK(state_frame_potential_closed(n, k, Ensemble::CliffordMatchgate) ==
            state_frame_potential_closed(n, k, Ensemble::Matchgate));

  // purity of the Clifford-matchgate vacuum moment
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto m = cm_vacuum_moment(n, k);
      CHECK(std::real(hs_inner(m, m)) ==
            doctest::Approx(to_double(state_frame_potential_closed(n, k, Ensemble::CliffordMatchgate))).epsilon(1e-10));
    }

  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; k += 2) {
      auto mg = state_frame_potential_mc(n, k, Ensemble::Matchgate, 6000, 100 + n * 10 + k);
      CHECK(within_sigma(mg, to_double(state_frame_potential_closed(n, k, Ensemble::Matchgate)), 4));
      auto cm = state_frame_potential_mc(n, k, Ensemble::CliffordMatchgate, 6000, 200 + n * 10 + k);
      CHECK(within_sigma(cm, to_double(state_frame_potential_closed(n, k, Ensemble::CliffordMatchgate)), 4));
    }
}

TEST_CASE("design gap") {
  CHECK(design_gap_exact(1) == 0);
  CHECK(design_gap_exact(2) == BigRational(1, 24));
  double prev = design_gap(2);
  for (int n = 3; n <= 6; ++n) {
    double g = design_gap(n);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("Q4 and the annealed stabilizer entropy") {
  for (int n = 1; n <= 2; ++n) {
    auto q = q4_operator(n);
    CHECK(max_coeff_diff(q, q4_pauli_operator(n)) < 1e-10);
    double scale = std::pow(4.0, n);
    CHECK(max_coeff_diff(op_multiply(q, q), scale * q) < 1e-9);
    for (std::uint64_t mu = 1; mu < (1ULL << (2 * n)); mu <<= 1) {
      auto chi = OperatorExpansion::single(n, 4, {mu, mu, mu, mu});
      CHECK(commutator(q, chi).max_abs() == 0.0);
    }
    CHECK(trace_p0_q4(n) == doctest::Approx(scale * to_double(catalan(n))));
    CHECK(std::abs(sre_annealed_direct(n) - sre_annealed_closed(n)) < 1e-9);
  }
  // n = 1 dense spectrum lies in {0, 4} with rank 4
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_dense(q4_operator(1)));
  int rank = 0;
  for (double v : es.eigenvalues()) {
    CHECK((std::abs(v) < 1e-10 || std::abs(v - 4) < 1e-10));
    rank += std::abs(v - 4) < 1e-10;
  }
  CHECK(rank == 4);

  CHECK(sre_annealed_closed(1) == doctest::Approx(0.0));
  CHECK(sre_annealed_closed(2) == doctest::Approx(std::log2(1.25)).epsilon(1e-12));
  CHECK(sre_annealed_closed(200) > 0);
  double gap = std::abs(sre_annealed_closed(8) - sre_asymptotic(8, false));
  CHECK(gap <= std::abs(sre_asymptotic(8, true) - sre_asymptotic(8, false)));
  CHECK_THROWS_AS(sre_annealed_direct(3), CapacityError);
  CHECK_THROWS_AS(q4_operator(5), CapacityError);
}

TEST_CASE("Gaussian de Finetti") {
  for (int n = 1; n <= 4; ++n)
    for (int k = 2; k <= 50; ++k)
      for (int l = 1; l <= std::min(3, k - 1); ++l) {
        double r = definetti_ratio(n, k, l);
        double via_trace = vacuum_trace(n, k - l) / vacuum_trace(n, k);
        CHECK(std::abs(r - via_trace) <= 1e-12);
        CHECK(definetti_ratio_exact(n, k, l) == vacuum_trace_exact(n, k - l) / vacuum_trace_exact(n, k));
        CHECK(2 * (1 - r) <= 2 * definetti_bound(n, k, l) + 1e-15);
      }
  CHECK(definetti_bound(1, 5, 2) == 0);
  CHECK(definetti_ratio(1, 5, 2) == 1);
  CHECK(definetti_bound_exact(2, 100, 1) == BigRational(2, 101));
  CHECK(definetti_ratio_exact(2, 4, 2) == BigRational(6, 10));
  CHECK_THROWS(definetti_bound(2, 3, 3));
  CHECK_THROWS(definetti_ratio(2, 3, 0));
}

TEST_CASE("covariance matrix and fermionic anti-flatness") {
  std::mt19937_64 rng(4);
  auto m = covariance_matrix(basis_state(2, 0));
  RealMatrix expect = RealMatrix::Zero(4, 4);
  expect(0, 1) = expect(2, 3) = 1;
  expect(1, 0) = expect(3, 2) = -1;
  CHECK((m - expect).norm() < 1e-12);
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(faf(basis_state(2, 0), k)) < 1e-12);

  for (int n = 1; n <= 3; ++n)
    for (int rep = 0; rep < 5; ++rep) {
      auto psi = gaussian_state(n, rng);
      auto c = covariance_matrix(psi);
      CHECK((c + c.transpose()).norm() < 1e-10);
      CHECK(faf(psi, 2) <= 1e-8);
      CHECK(faf(psi, 2) >= -1e-9);
      auto r = random_state(n + 1, rng);
      auto cr = covariance_matrix(r);
      Eigen::JacobiSVD<RealMatrix> svd(cr);
      CHECK(svd.singularValues().maxCoeff() <= 1 + 1e-10);
      CHECK(faf(r, 2) >= -1e-9);
    }
  StateVec probe(4);
  probe << 0.5, 0.5, -0.5, 0.5;  // |00> + |01> - |10> + |11>
  CHECK(faf(probe, 2) > 0.01);
  StateVec bad = StateVec::Ones(4);
  CHECK_THROWS(covariance_matrix(bad));
  CHECK_THROWS(faf(basis_state(1, 0), 0));
}

TEST_CASE("Gaussian-invariant functionals") {
  std::mt19937_64 rng(17);
  for (int k = 2; k <= 4; ++k) CHECK(phi0(basis_state(2, 0), k) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(gaussianity_residual(basis_state(2, 0)) < 1e-10);
  for (int rep = 0; rep < 5; ++rep) {
    auto psi = gaussian_state(2, rng);
    CHECK(gaussianity_residual(psi) < 1e-10);
    CHECK(phi0(psi, 2) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(phi0(psi, 3) == doctest::Approx(1.0).epsilon(1e-9));
  }
  // superposition across parity sectors is not Gaussian
  StateVec probe(4);
  probe << 0.5, 0.5, -0.5, 0.5;
  CHECK(gaussianity_residual(probe) > 1e-3);
  double p2 = phi0(probe, 2);
  CHECK(p2 < 1 - 1e-3);
  CHECK(p2 >= -1e-12);

  // symbolic and dense routes agree at n = 1
  for (int rep = 0; rep < 4; ++rep) {
    auto psi = random_state(1, rng);
    for (int k = 2; k <= 4; ++k) {
      double s = phi0(psi, k, Phi0Route::Symbolic);
      double d = phi0(psi, k, Phi0Route::Dense);
      CHECK(std::abs(s - d) < 1e-9);
      CHECK(s <= 1 + 1e-9);
    }
  }
  for (int rep = 0; rep < 3; ++rep) {
    auto psi = random_state(2, rng);
    CHECK(std::abs(phi0(psi, 2, Phi0Route::Symbolic) - phi0(psi, 2, Phi0Route::Dense)) < 1e-9);
  }

  // phi_W against the dense trace Tr[W rho^{(x)k}]
  for (int rep = 0; rep < 4; ++rep) {
    auto psi = random_state(2, rng);
    auto w = testing::hermitian_part(testing::random_operator(2, 2, 8, rng));
    StateVec big(16);
    for (int a = 0; a < 4; ++a) big.segment(4 * a, 4) = psi(a) * psi;
    double dense = std::real(big.dot(to_dense(w) * big));
    CHECK(phi_w(w, psi) == doctest::Approx(dense).epsilon(1e-10));
  }
  CHECK_THROWS_AS(phi0(basis_state(1, 0), 6, Phi0Route::Symbolic), UnsupportedError);
  CHECK_THROWS(phi0(basis_state(1, 0), 1));
}

TEST_CASE("shadow inverse channel") {
  auto e1 = shadow_inverse_channel(1);
  REQUIRE(e1.size() == 2);
  CHECK(e1[0] == std::pair<int, double>{0, 1.0});
  CHECK(e1[1] == std::pair<int, double>{2, 1.0});
  CHECK(shadow_inverse_channel(2)[1].second == 3.0);
  CHECK(shadow_inverse_channel(3)[1].second == 5.0);

  // D is the dense computational-basis diagonal sum_b |b><b| (x) |b><b|
  for (int n = 1; n <= 2; ++n) {
    std::size_t d = std::size_t{1} << n;
    DenseMatrix diag = DenseMatrix::Zero(d * d, d * d);
    for (std::size_t b = 0; b < d; ++b) diag(b * d + b, b * d + b) = 1;
    CHECK((to_dense(computational_diagonal(n)) - diag).norm() < 1e-12);
  }

  std::mt19937_64 rng(23);
  for (int n = 1; n <= 3; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      auto rho = testing::random_operator(n, 1, 8, rng);
      auto back = apply_shadow_inverse(shadow_channel(rho));
      OperatorExpansion even(n, 1);
      for (const Term& t : rho.terms())
        if (std::popcount(t.key) % 2 == 0) even += t.c * OperatorExpansion::single(n, 1, {t.key});
      CHECK(max_coeff_diff(back, even) < 1e-9);
    }
  // measurement channel against the dense Monte-Carlo average at n = 1
  auto rho = testing::hermitian_part(testing::random_operator(1, 1, 4, rng));
  auto mc = mc_twirl(to_dense(computational_diagonal(1)), 1, 2, 4000, 9);
  OperatorExpansion twirled = from_dense(mc.mean, 1, 2);
  double diff = (to_dense(contract_first(twirled, rho)) - to_dense(shadow_channel(rho))).norm();
  CHECK(diff <= 4 * mc.stderr_frobenius * hs_norm(rho) + 1e-12);
}
