#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mgc/bridge_gt.hpp"
#include "mgc/combinatorics.hpp"
#include "mgc/dense.hpp"
#include "mgc/majorana.hpp"

namespace mgc {

struct McEstimate {
  double value = 0;
  double stderr_ = 0;
  int samples = 0;
};

enum class Ensemble { Matchgate, CliffordMatchgate };

// --- twirls and the vacuum sector -----------------------------------------

// Projection onto the span of the GT basis (built here, capacity gated).
OperatorExpansion matchgate_twirl(const OperatorExpansion& w, GTBasisOptions opt = {});
OperatorExpansion matchgate_twirl(const OperatorExpansion& w,
                                  const std::vector<GTBasisElement>& basis);

// Projector onto the trivial SO(k) sector. The quadratic Casimir already
// separates the zero weight from every other allowed weight.
OperatorExpansion vacuum_projector(int n, int k);
// 2 prod_{i<j} (k+2n-i-j)/(2n-i-j)
BigRational vacuum_trace_exact(int n, int k);
double vacuum_trace(int n, int k);

// --- frame potentials ------------------------------------------------------

BigInt unitary_frame_potential_closed(int n, int k);
// Gamma-function product of the random-matrix route, evaluated exactly
BigRational unitary_frame_potential_rmt(int n, int k);
// E |Tr U|^{2k} over Haar matchgates
McEstimate unitary_frame_potential_mc(int n, int k, int samples, std::uint64_t seed);

BigRational state_frame_potential_closed(int n, int k, Ensemble e);
// Selberg-integral product for the matchgate ensemble
double state_frame_potential_selberg(int n, int k);
// E |<0|U|0>|^{2k}
McEstimate state_frame_potential_mc(int n, int k, Ensemble e, int samples, std::uint64_t seed);

// |F_CM - F_MG| / F_MG at k = 4
BigRational design_gap_exact(int n);
double design_gap(int n);

// --- magic -----------------------------------------------------------------

// sum_S gamma_S^{(x)4} = prod_mu (1 + gamma_mu^{(x)4})
OperatorExpansion q4_operator(int n);
// sum over Pauli strings P of P^{(x)4}, assembled densely (dense gate)
OperatorExpansion q4_pauli_operator(int n);

double sre_annealed_closed(int n);
// -log2[2^{-n} Tr(matchgate_twirl(|0><0|^{(x)4}) Q4)], n <= 2
double sre_annealed_direct(int n);
// n + 2 - 3/2 log2 n - 1/2 log2 pi [- 21/(8 ln 2 n)]
double sre_asymptotic(int n, bool with_inverse_n_term);
// Tr(P0^{(4)} Q4) from the symbolic projector
double trace_p0_q4(int n);

// --- de Finetti ------------------------------------------------------------

BigRational definetti_bound_exact(int n, int k, int l);
BigRational definetti_ratio_exact(int n, int k, int l);
double definetti_bound(int n, int k, int l);
double definetti_ratio(int n, int k, int l);

// --- non-Gaussianity -------------------------------------------------------

// M_mn = -i <gamma_m gamma_n> for m != n
RealMatrix covariance_matrix(const StateVec& psi);
double faf(const StateVec& psi, int k);
// Tr[W (|psi><psi|)^{(x)k}]
double phi_w(const OperatorExpansion& w, const StateVec& psi);
enum class Phi0Route { Auto, Symbolic, Dense };
double phi0(const StateVec& psi, int k, Phi0Route route = Phi0Route::Auto);
// || sum_mu gamma_mu psi (x) gamma_mu psi ||
double gaussianity_residual(const StateVec& psi);

// --- shadows ---------------------------------------------------------------

// (2l, binom(2n,2l)/binom(n,l)) for l = 0..n
std::vector<std::pair<int, double>> shadow_inverse_channel(int n);
// sum_b |b><b| (x) |b><b| on two replicas
OperatorExpansion computational_diagonal(int n);
// measurement channel rho -> Tr_1[(rho (x) 1) matchgate_twirl(D)]
OperatorExpansion shadow_channel(const OperatorExpansion& rho);
// multiply weight-2l components by the inverse eigenvalue, drop odd weights
OperatorExpansion apply_shadow_inverse(const OperatorExpansion& x);
// Tr_1[(a (x) 1) x] for a single-replica a and a two-replica x
OperatorExpansion contract_first(const OperatorExpansion& x, const OperatorExpansion& a);

}  // namespace mgc
