#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mgc/combinatorics.hpp"
#include "mgc/majorana.hpp"

namespace mgc {

// Symmetric k x k adjacency with zero diagonal; x[i][j] pairs between
// replicas i+1 and j+1.
struct PairingConfig {
  std::vector<std::vector<int>> x;

  int k() const { return static_cast<int>(x.size()); }
  std::vector<int> row_sums() const;
  // upper triangle x12, x13, ..., x1k, x23, ...
  std::vector<int> upper() const;
  std::string str() const;
  bool operator==(const PairingConfig&) const = default;
};

PairingConfig config_from_upper(int k, const std::vector<int>& upper);

// Slot-level perfect matching between the r_j slots of each replica.
// mate[j][s] = (replica, slot) matched to slot s of replica j, 0-based.
struct SlotMatching {
  std::vector<std::vector<std::pair<int, int>>> mate;
};

// slots assigned to partners in increasing partner order
SlotMatching canonical_matching(const PairingConfig& c);
// same adjacency data, slots shuffled
SlotMatching random_matching(const PairingConfig& c, std::mt19937_64& rng);
PairingConfig matching_config(const SlotMatching& m);

// All configs with the given row sums, larger upper-triangle vectors first.
std::vector<PairingConfig> admissible_configs(const std::vector<int>& r);

// Antisymmetrized pairing operator, scaled to unit coefficient norm
// (hs_inner with itself = 2^{nk}). Throws std::invalid_argument when the
// configuration cannot be realized with 2n modes.
OperatorExpansion pairing_operator(const PairingConfig& c, int n);
OperatorExpansion pairing_operator(const SlotMatching& m, int n);
bool pairing_feasible(const PairingConfig& c, int n);

// Hermitian Gram matrix of HS inner products.
Eigen::MatrixXcd gram_matrix(const std::vector<OperatorExpansion>& ops);
// count of Gram eigenvalues above tol * largest
int gram_rank(const Eigen::MatrixXcd& g, double tol = 1e-9);
int span_rank(const std::vector<OperatorExpansion>& ops, double tol = 1e-9);

// weight tuples r in [0, 2n]^k with even total
std::vector<std::vector<int>> weight_tuples(int n, int k);
// feasible pairing operators of one sector, with their configs
std::vector<std::pair<PairingConfig, OperatorExpansion>> sector_pairings(
    const std::vector<int>& r, int n);
// every feasible pairing operator at (n, k)
std::vector<OperatorExpansion> pairing_spanning_set(int n, int k);

struct PairingRank {
  BigInt rank = 0;
  long long operators = 0;
  long long sectors = 0;  // sectors with at least one operator
};
// rank of the full pairing spanning set, summed sector by sector
PairingRank pairing_span_rank(int n, int k, double tol = 1e-9);

// orthogonal projection of w onto span(ops) via the Gram pseudo-inverse
OperatorExpansion project_onto_span(const std::vector<OperatorExpansion>& ops,
                                    const OperatorExpansion& w,
                                    double tol = 1e-9);

}  // namespace mgc
