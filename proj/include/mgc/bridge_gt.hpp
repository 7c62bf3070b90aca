#pragma once

#include <map>
#include <string>
#include <vector>

#include "mgc/combinatorics.hpp"
#include "mgc/majorana.hpp"

namespace mgc {

// Highest weight of the replica SO(k) action, r = floor(k/2) parts.
// Even k allows a signed last part; k = 2 has the single part nu in [-n, n].
struct HighestWeight {
  int k = 2;
  std::vector<int> parts;

  auto operator<=>(const HighestWeight&) const = default;
  std::string str() const;
};

// Labels down the chain SO(k-1), ..., SO(2); labels[0] belongs to level k-1.
// k=3: {{m}}, k=4: {{s},{m}}, k=5: {{mu1,mu2},{s},{m}}.
struct GTPattern {
  std::vector<std::vector<int>> labels;

  auto operator<=>(const GTPattern&) const = default;
  std::string str() const;
};

enum class CasimirKind { Quadratic, TracePower, Pfaffian, Quartic };

// Casimir of the subalgebra so(level) acting on replicas 1..level.
//  Quadratic  : 1/4 sum_{a<b} B_ab^2                      (index 1)
//  TracePower : Tr[(L)^{2 index}], L_ab = B_ab / 2        (index <= level/2)
//  Pfaffian   : Pf(L) for level 4; i * L_12 for level 2    (index = level/2)
//  Quartic    : level 5 combination with eigenvalue
//               (nu1 + 3/2)^2 (nu2 + 1/2)^2 - 9/16          (index 2)
struct CasimirSpec {
  int level = 2;
  int index = 1;
  CasimirKind kind = CasimirKind::Quadratic;
};

struct GTBasisElement {
  HighestWeight weight;
  GTPattern source, target;
  OperatorExpansion op;
};

// --- weights and dimensions (exact) ---------------------------------------

std::vector<HighestWeight> enumerate_weights(int n, int k);
bool is_valid_weight(const HighestWeight& w, int n);
BigInt weyl_dim(const HighestWeight& w);
// product formula
BigInt commutant_dim(int n, int k);
// sum over I_{n,k} of weyl_dim^2
BigInt commutant_dim_by_sectors(int n, int k);
// multiplicity of the SO(k) irrep nu in (C^{2^n})^{(x)k}, from the Weyl
// character of the replica torus; independent of every operator routine
BigInt sector_multiplicity(const HighestWeight& w, int n);

std::vector<GTPattern> gt_patterns(const HighestWeight& w);
// sum over weights of |GT(nu)|^2
BigInt gt_label_count(int n, int k);

// --- operators -------------------------------------------------------------

// Bridge generator B_ab (1-based a < b). Each B is a sum of 2n replicated
// strings with unit-modulus coefficients. The replicas between a and b and
// the even-numbered endpoints carry parity factors so that the B_ab close
// into so(k) with commuting tensor slots.
OperatorExpansion bridge_operator(int a, int b, int n, int k);
// The untwisted bilinear sum_mu gamma_mu^(a) gamma_mu^(b).
OperatorExpansion plain_bilinear(int a, int b, int n, int k);

OperatorExpansion casimir(const CasimirSpec& spec, int n, int k);
Rational casimir_eigenvalue_exact(const HighestWeight& w, const CasimirSpec& spec);
double casimir_eigenvalue(const HighestWeight& w, const CasimirSpec& spec);

OperatorExpansion sector_projector(const HighestWeight& w, int n, int k);
OperatorExpansion gt_projector(const HighestWeight& w, const GTPattern& p,
                               int n, int k);
// X_{source, target}: maps the target GT line to the source GT line
GTBasisElement transition_operator(const HighestWeight& w,
                                   const GTPattern& source,
                                   const GTPattern& target, int n, int k);

struct GTBasisOptions {
  int max_k5_n = 1;       // k = 5 is gated to n <= this
  int max_support_bits = 12;  // gate on 2n(k-1), the commutant support size
};

std::vector<GTBasisElement> gt_basis(int n, int k, GTBasisOptions opt = {});
void check_gt_capacity(int n, int k, const GTBasisOptions& opt = {});

}  // namespace mgc
