#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "mgc/bridge_gt.hpp"
#include "mgc/dense.hpp"
#include "mgc/pairing.hpp"

using namespace mgc;

namespace {

double binom_d(int n, int k) { return to_double(binomial(n, k)); }

}  // namespace

TEST_CASE("admissible configurations") {
  auto a = admissible_configs({3, 3});
  REQUIRE(a.size() == 1);
  CHECK(a[0].x[0][1] == 3);

  auto b = admissible_configs({1, 1, 2});
  REQUIRE(b.size() == 1);
  CHECK(b[0].upper() == std::vector<int>{0, 1, 1});

  auto c = admissible_configs({1, 1, 1, 1});
  REQUIRE(c.size() == 3);
  CHECK(c[0].upper() == std::vector<int>{1, 0, 0, 0, 0, 1});  // (12)(34)
  CHECK(c[1].upper() == std::vector<int>{0, 1, 0, 0, 1, 0});  // (13)(24)
  CHECK(c[2].upper() == std::vector<int>{0, 0, 1, 1, 0, 0});  // (14)(23)

  CHECK(admissible_configs({1, 2}).empty());
  CHECK(admissible_configs({1, 1, 1}).empty());
  CHECK(admissible_configs({2, 2, 2, 2}).size() == 6);
  for (auto& cfg : admissible_configs({2, 3, 1, 4, 2})) CHECK(cfg.row_sums() == std::vector<int>{2, 3, 1, 4, 2});
  CHECK_THROWS(admissible_configs({-1, 1}));
}

TEST_CASE("k = 2 pairing operators") {
  for (int n = 1; n <= 3; ++n)
    for (int r = 0; r <= 2 * n; ++r) {
      auto t = pairing_operator(config_from_upper(2, {r}), n);
      CHECK(t.size() == static_cast<std::size_t>(binomial(2 * n, r)));
      double c = 1.0 / std::sqrt(binom_d(2 * n, r));
      for (const Term& term : t.terms()) {
        CHECK(t.replica_mask(term.key, 0) == t.replica_mask(term.key, 1));
        CHECK(std::abs(term.c - c) < 1e-15);
      }
      CHECK(std::real(hs_inner(t, t)) == doctest::Approx(std::pow(4.0, n)));
    }
  CHECK_THROWS(pairing_operator(config_from_upper(2, {3}), 1));
}

TEST_CASE("k = 3 pairing operators carry ordering signs") {
  // x12 = x13 = 1 at n = 1: gamma_12 (x) (g1 (x) g2 - g2 (x) g1), normalized
  auto t = pairing_operator(config_from_upper(3, {1, 1, 0}), 1);
  REQUIRE(t.size() == 2);
  CHECK(std::abs(t.coeff({3, 1, 2}) - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(t.coeff({3, 2, 1}) + 1 / std::sqrt(2.0)) < 1e-15);
  // every replica pair shares a replica: x12 = x13 = x23 = 1 needs 3 modes
  CHECK_THROWS_AS(pairing_operator(config_from_upper(3, {1, 1, 1}), 1), std::invalid_argument);
  CHECK_NOTHROW(pairing_operator(config_from_upper(3, {1, 1, 1}), 2));

  // the unsigned sum is not invariant, the signed one is
  std::mt19937_64 rng(3);
  auto s = random_orthogonal_component(1, false, rng);
  OperatorExpansion plain(1, 3);
  for (const Term& term : t.terms()) plain += OperatorExpansion::from_terms(1, 3, {{term.key, std::abs(term.c)}});
  CHECK(max_coeff_diff(apply_orthogonal(t, s.q), t) < 1e-12);
  CHECK(max_coeff_diff(apply_orthogonal(plain, s.q), plain) > 1e-3);

  // sector bookkeeping
  auto u = pairing_operator(config_from_upper(3, {1, 1, 0}), 2);
  auto sectors = weight_sector(u);
  REQUIRE(sectors.size() == 1);
  CHECK(sectors.begin()->first == std::vector<int>{2, 1, 1});
}

TEST_CASE("pairing operators are matchgate invariant") {
  std::mt19937_64 rng(17);
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto ops = pairing_spanning_set(n, k);
      std::vector<OrthogonalSample> qs;
      for (int i = 0; i < 10; ++i) qs.push_back(random_orthogonal_component(n, i % 2 == 1, rng));
      for (auto& op : ops) {
        double worst = 0;
        for (auto& s : qs) worst = std::max(worst, max_coeff_diff(apply_orthogonal(op, s.q), op));
        CHECK(worst < 1e-10);
      }
      // dense commutator residual on a sample
      if (n * k <= 6)
        for (std::size_t i = 0; i < ops.size(); i += 3)
          for (int j = 0; j < 2; ++j) CHECK(commutator_residual(ops[i], qs[j].q, n, k) < 1e-8);
    }
}

TEST_CASE("span of pairings equals the commutant dimension") {
  for (int n = 1; n <= 2; ++n)
    for (int k = 2; k <= 4; ++k) {
      auto res = pairing_span_rank(n, k);
      CHECK(res.rank == commutant_dim(n, k));
      // per-sector blocking gives the same rank as the full Gram
      if (res.operators <= 80) CHECK(span_rank(pairing_spanning_set(n, k)) == commutant_dim(n, k));
    }
  CHECK(pairing_span_rank(1, 5).rank == 126);
  CHECK(pairing_span_rank(3, 3).rank == 84);
  CHECK(span_rank(pairing_spanning_set(1, 4)) == 35);
}

TEST_CASE("worked Gram example and overcompleteness") {
  std::vector<OperatorExpansion> g1111;
  for (auto& c : admissible_configs({1, 1, 1, 1})) g1111.push_back(pairing_operator(c, 1));
  auto g = gram_matrix(g1111);
  Eigen::MatrixXd want(3, 3);
  want << 16, 8, 8, 8, 16, 8, 8, 8, 16;
  CHECK((g.real() - want).norm() == 0.0);
  CHECK(g.imag().norm() == 0.0);
  CHECK(gram_rank(g) == 3);

  std::vector<OperatorExpansion> g2222;
  for (auto& c : admissible_configs({2, 2, 2, 2})) {
    auto op = pairing_operator(c, 1);
    CHECK(op.size() == 1);
    CHECK(std::abs(op.coeff({3, 3, 3, 3})) == doctest::Approx(1.0));
    g2222.push_back(op);
  }
  CHECK(g2222.size() == 6);
  CHECK(span_rank(g2222) == 1);

  // the GT basis has an identity Gram
  std::vector<OperatorExpansion> gt;
  for (auto& e : gt_basis(1, 3)) gt.push_back(e.op);
  CHECK((gram_matrix(gt) - Eigen::MatrixXcd::Identity(10, 10)).norm() < 1e-10);
  CHECK_THROWS(gram_matrix({}));
}

TEST_CASE("faithful regime: distinct configs are independent when R <= 4n") {
  int n = 2, k = 4;
  for (auto& r : weight_tuples(n, k)) {
    int total = 0;
    for (int v : r) total += v;
    if (total > 4 * n) continue;
    auto ops = sector_pairings(r, n);
    if (ops.empty()) continue;
    std::vector<OperatorExpansion> v;
    for (auto& [c, op] : ops) v.push_back(op);
    CHECK(span_rank(v) == static_cast<int>(v.size()));
  }
}

TEST_CASE("matchings with equal adjacency agree up to sign") {
  std::mt19937_64 rng(5);
  for (int n = 1; n <= 2; ++n)
    for (int k = 3; k <= 5; ++k)
      for (auto& r : weight_tuples(n, k)) {
        if (rng() % 5) continue;
        for (auto& [c, op] : sector_pairings(r, n)) {
          auto m = random_matching(c, rng);
          CHECK(matching_config(m) == c);
          auto other = pairing_operator(m, n);
          double plus = max_coeff_diff(other, op), minus = max_coeff_diff(other, -1.0 * op);
          CHECK(std::min(plus, minus) < 1e-14);
        }
      }
  SlotMatching bad{{{{1, 0}}, {{0, 1}}}};
  CHECK_THROWS(pairing_operator(bad, 1));
}

TEST_CASE("span projection does not depend on the spanning set") {
  std::mt19937_64 rng(50);
  for (auto [n, k] : {std::pair{1, 3}, std::pair{1, 4}, std::pair{2, 3}}) {
    auto pairs = pairing_spanning_set(n, k);
    std::vector<OperatorExpansion> gt;
    for (auto& e : gt_basis(n, k)) gt.push_back(e.op);
    int reps = n == 1 && k == 4 ? 30 : 10;
    for (int rep = 0; rep < reps; ++rep) {
      auto w = testing::random_operator(n, k, 12, rng);
      auto a = project_onto_span(pairs, w);
      OperatorExpansion b(n, k);
      for (auto& x : gt) b += hs_inner(x, w) * x;
      CHECK(max_coeff_diff(a, b) < 1e-7);
    }
  }
}
