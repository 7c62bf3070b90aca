#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mgc/combinatorics.hpp"
#include "mgc/majorana.hpp"

namespace mgc {

// Occupation numbers x_I of the even replica patterns I subset of {1..k}.
// counts[c] belongs to even_patterns(k)[c]; patterns are replica bitmasks
// (replica j at bit j-1) in increasing order, the empty pattern first.
struct PatternOccupancy {
  int k = 1;
  std::vector<int> counts;

  int total() const;
  // pattern -> count, 1-based replica lists
  std::vector<std::pair<std::vector<int>, int>> entries() const;
  std::string str() const;
  bool operator==(const PatternOccupancy&) const = default;
};

std::vector<std::uint32_t> even_patterns(int k);
std::vector<int> pattern_replicas(std::uint32_t pattern);
PatternOccupancy occupancy_from_entries(
    int k, const std::vector<std::pair<std::vector<int>, int>>& entries);

// Weak compositions of 2n over the even patterns, lexicographic in counts.
std::vector<PatternOccupancy> enumerate_occupancies(int n, int k, bool even_only = false);

// Sum over assignments of modes to patterns with the given counts. Each
// distinct replicated string appears once with coefficient +-1; the sign is
// the one produced by relabelling the reference assignment (modes given to
// patterns in increasing order), so the sum is an orbit of the signed
// permutation action.
OperatorExpansion pattern_operator(const PatternOccupancy& o, int n, bool normalized = false);
// multinomial(2n; x); the squared HS norm of the unnormalized operator is
// 2^{kn} times this
BigInt pattern_multiplicity(const PatternOccupancy& o);

BigInt cm_dim(int n, int k);

OperatorExpansion cm_twirl(const OperatorExpansion& w);
// literal average over the 2^{2n} (2n)! signed permutations, n <= 2
OperatorExpansion cm_twirl_exhaustive(const OperatorExpansion& w);
std::vector<SignedPermutation> all_signed_permutations(int n);

// cm_twirl of the replicated vacuum from its closed-form coefficients
OperatorExpansion cm_vacuum_moment(int n, int k);

}  // namespace mgc
