#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mgc/bridge_gt.hpp"
#include "mgc/clifford_matchgate.hpp"
#include "mgc/dense.hpp"
#include "mgc/pairing.hpp"

using namespace mgc;

namespace {

SignedPermutation random_signed_permutation(int n, std::mt19937_64& rng) {
  SignedPermutation sp = SignedPermutation::identity(n);
  std::shuffle(sp.perm.begin(), sp.perm.end(), rng);
  for (int& s : sp.signs) s = rng() & 1 ? -1 : 1;
  return sp;
}

PatternOccupancy occ(int k, std::vector<std::pair<std::vector<int>, int>> e) {
  return occupancy_from_entries(k, e);
}

}  // namespace

TEST_CASE("occupancy enumeration") {
  auto o = enumerate_occupancies(1, 2);
  REQUIRE(o.size() == 3);
  for (int x = 0; x <= 2; ++x) {
    auto e = o[2 - x].entries();
    CHECK(e[1].second == x);
    CHECK(e.size() == 2);
  }
  CHECK(enumerate_occupancies(1, 4).size() == 36);
  auto ev = enumerate_occupancies(1, 2, true);
  REQUIRE(ev.size() == 2);
  for (auto& p : ev)
    for (int c : p.counts) CHECK(c % 2 == 0);
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 4; ++k) CHECK(enumerate_occupancies(n, k).size() == static_cast<std::size_t>(cm_dim(n, k)));
  CHECK(occ(3, {{{1, 3}, 1}, {{}, 1}}).str() == "{x[]=1,x[1,3]=1}");
  CHECK_THROWS(occ(3, {{{1}, 1}}));
}

TEST_CASE("Clifford-matchgate dimension") {
  for (int n = 1; n <= 5; ++n) {
    CHECK(cm_dim(n, 2) == 2 * n + 1);
    CHECK(cm_dim(n, 3) == binomial(2 * n + 3, 3));
    CHECK(cm_dim(n, 3) == commutant_dim(n, 3));
    CHECK(cm_dim(n, 4) > commutant_dim(n, 4));
  }
  CHECK(cm_dim(1, 4) == 36);
  CHECK(cm_dim(2, 4) == 330);
  CHECK(cm_dim(1, 1) == 1);
}

TEST_CASE("pattern operators") {
  auto o = occ(2, {{{1, 2}, 1}, {{}, 1}});
  auto om = pattern_operator(o, 1);
  REQUIRE(om.size() == 2);
  CHECK(om.coeff({1, 1}) == cplx(1, 0));
  CHECK(om.coeff({2, 2}) == cplx(1, 0));
  CHECK(std::real(hs_inner(om, om)) == 8.0);
  CHECK(max_coeff_diff(pattern_operator(occ(3, {{{}, 4}}), 2), OperatorExpansion::identity(2, 3)) == 0.0);
  auto nrm = pattern_operator(o, 1, true);
  CHECK(std::real(hs_inner(nrm, nrm)) == doctest::Approx(1.0));
  CHECK_THROWS(pattern_operator(occ(2, {{{}, 3}}), 1));

  // k = 4, n = 1: the extra invariant sum_mu gamma_mu^{(x)4}
  auto extra = pattern_operator(occ(4, {{{1, 2, 3, 4}, 1}, {{}, 1}}), 1);
  CHECK(extra.size() == 2);
  CHECK(extra.coeff({1, 1, 1, 1}) == cplx(1, 0));
  CHECK(extra.coeff({2, 2, 2, 2}) == cplx(1, 0));
}

TEST_CASE("pattern operators are exactly signed-permutation invariant") {
  std::mt19937_64 rng(21);
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 4; ++k) {
      std::vector<SignedPermutation> gs;
      for (int i = 0; i < 100; ++i) gs.push_back(random_signed_permutation(n, rng));
      for (auto& o : enumerate_occupancies(n, k)) {
        auto om = pattern_operator(o, n);
        bool exact = true;
        for (auto& g : gs) exact = exact && max_coeff_diff(apply_signed_permutation(om, g), om) == 0.0;
        CHECK(exact);
      }
    }
}

TEST_CASE("pattern operators are orthogonal with integer norms") {
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 4; ++k) {
      auto occs = enumerate_occupancies(n, k);
      std::vector<OperatorExpansion> ops;
      for (auto& o : occs) ops.push_back(pattern_operator(o, n));
      BigInt scale = BigInt(1) << (n * k);
      for (std::size_t i = 0; i < ops.size(); ++i) {
        // integer coefficients: count of strings is the multinomial
        BigInt terms = ops[i].size();
        CHECK(terms == pattern_multiplicity(occs[i]));
        BigInt norm2 = 0;
        for (const Term& t : ops[i].terms()) {
          CHECK(std::abs(std::abs(t.c) - 1.0) == 0.0);
          norm2 += 1;
        }
        CHECK(norm2 * scale == scale * pattern_multiplicity(occs[i]));
        for (std::size_t j = i + 1; j < ops.size(); ++j) CHECK(hs_inner(ops[i], ops[j]) == cplx(0, 0));
      }
    }
}

TEST_CASE("Clifford-matchgate twirl") {
  std::mt19937_64 rng(8);
  auto om = pattern_operator(occ(3, {{{1, 2}, 1}, {{2, 3}, 1}}), 1);
  CHECK(max_coeff_diff(cm_twirl(om), om) < 1e-12);
  CHECK(cm_twirl(OperatorExpansion::single(1, 2, {1, 0})).empty());

  // exhaustive group average, n = 1: 8 elements
  CHECK(all_signed_permutations(1).size() == 8);
  CHECK(all_signed_permutations(2).size() == 384);
  auto g11 = OperatorExpansion::single(1, 2, {1, 1});
  auto ex = cm_twirl_exhaustive(g11);
  CHECK(max_coeff_diff(ex, 0.5 * plain_bilinear(1, 2, 1, 2)) < 1e-15);
  CHECK(max_coeff_diff(ex, cm_twirl(g11)) < 1e-15);
  CHECK(max_coeff_diff(cm_twirl_exhaustive(OperatorExpansion::identity(2, 3)), OperatorExpansion::identity(2, 3)) < 1e-15);

  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 3; ++k)
      for (int rep = 0; rep < 20; ++rep) {
        auto w = testing::random_operator(n, k, 10, rng);
        auto a = cm_twirl(w);
        CHECK(max_coeff_diff(a, cm_twirl_exhaustive(w)) < 1e-12);
        if (rep < 3) CHECK(max_coeff_diff(cm_twirl(a), a) < 1e-12);
      }
  CHECK_THROWS_AS(cm_twirl_exhaustive(OperatorExpansion::identity(3, 1)), CapacityError);
}

TEST_CASE("matchgate commutant sits inside the Clifford-matchgate commutant") {
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      double worst = 0;
      for (auto& e : gt_basis(n, k)) worst = std::max(worst, max_coeff_diff(cm_twirl(e.op), e.op));
      CHECK(worst < 1e-8);
    }
  // k = 4, n = 1: one extra dimension, spanned by sum_mu gamma_mu^{(x)4}
  std::vector<OperatorExpansion> mg = pairing_spanning_set(1, 4);
  CHECK(span_rank(mg) == 35);
  std::vector<OperatorExpansion> cm;
  for (auto& o : enumerate_occupancies(1, 4)) cm.push_back(pattern_operator(o, 1));
  CHECK(span_rank(cm) == 36);
  OperatorExpansion extra(1, 4);
  for (std::uint64_t mu : {1ULL, 2ULL}) extra += OperatorExpansion::single(1, 4, {mu, mu, mu, mu});
  auto residual = extra - project_onto_span(mg, extra);
  CHECK(hs_norm(residual) > 0.5);
  mg.push_back(extra);
  CHECK(span_rank(mg) == 36);
  auto both = mg;
  both.insert(both.end(), cm.begin(), cm.end());
  CHECK(span_rank(both) == 36);
}

TEST_CASE("Clifford-matchgate vacuum moments") {
  auto m11 = cm_vacuum_moment(1, 1);
  CHECK(max_coeff_diff(m11, 0.5 * OperatorExpansion::identity(1, 1)) < 1e-15);
  for (int n = 1; n <= 2; ++n)
    for (int k = 1; k <= 4; ++k) {
      auto m = cm_vacuum_moment(n, k);
      CHECK(std::real(op_trace(m)) == doctest::Approx(1.0));
      CHECK(max_coeff_diff(m, cm_twirl(vacuum_state(n, k))) < 1e-10);
    }
  auto m12 = cm_vacuum_moment(1, 2);
  CHECK(std::real(hs_inner(m12, m12)) == doctest::Approx(0.5));
  CHECK_THROWS_AS(cm_vacuum_moment(4, 4), CapacityError);
}
