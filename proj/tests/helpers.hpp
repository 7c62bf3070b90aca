#pragma once

#include <random>

#include "mgc/majorana.hpp"

namespace mgc::testing {

// sparse random operator with `terms` strings and gaussian coefficients
inline OperatorExpansion random_operator(int n, int k, int terms,
                                         std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> mask(0, (1ULL << (2 * n)) - 1);
  std::normal_distribution<double> g(0, 1);
  std::vector<Term> t;
  OperatorExpansion shape(n, k);
  for (int i = 0; i < terms; ++i) {
    std::vector<std::uint64_t> m(k);
    for (auto& x : m) x = mask(rng);
    t.push_back({shape.pack(m), {g(rng), g(rng)}});
  }
  return OperatorExpansion::from_terms(n, k, std::move(t));
}

inline OperatorExpansion hermitian_part(const OperatorExpansion& a) {
  return 0.5 * (a + op_adjoint(a));
}

}  // namespace mgc::testing
