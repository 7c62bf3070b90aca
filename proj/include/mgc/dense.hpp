#pragma once

#include <cstdint>
#include <random>

#include "mgc/majorana.hpp"

namespace mgc {

using DenseMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using StateVec = Eigen::VectorXcd;

// Largest dense dimension allowed; MGC_MAX_DENSE_DIM overrides 4096.
std::size_t max_dense_dim();
void check_dense_capacity(int qubits);

DenseMatrix jw_gamma(int mu, int n);
// canonical gamma_S on one replica
DenseMatrix string_matrix(std::uint64_t mask, int n);

DenseMatrix to_dense(const OperatorExpansion& a);
OperatorExpansion from_dense(const DenseMatrix& m, int n, int k);

struct GaussianGenerator {
  RealMatrix kmat;  // antisymmetric 2n x 2n
};

// exp(1/4 sum K_{mu nu} gamma_mu gamma_nu)
DenseMatrix gaussian_unitary(const GaussianGenerator& g, int n);
// Pauli X on the last qubit
DenseMatrix reflection_unitary(int n);
// Q(nu, mu) = 2^{-n} Tr(gamma_nu U gamma_mu U^dagger)
RealMatrix induced_orthogonal(const DenseMatrix& u, int n);
// a unitary whose adjoint action is Q (Givens synthesis; any lift)
DenseMatrix unitary_from_orthogonal(const RealMatrix& q, int n);
// diag(1, ..., 1, -1), the action of reflection_unitary
RealMatrix reflection_orthogonal(int n);

struct OrthogonalSample {
  RealMatrix q;
  GaussianGenerator generator;  // Q R^reflected = exp(K)
  bool reflected = false;
};

// Haar on O(2n)
OrthogonalSample random_orthogonal(int n, std::mt19937_64& rng);
OrthogonalSample random_orthogonal(int n, std::uint64_t seed);
// Haar on the requested component
OrthogonalSample random_orthogonal_component(int n, bool reflected,
                                             std::mt19937_64& rng);
DenseMatrix sample_unitary(const OrthogonalSample& s, int n);

// U^{(x)k} X U^{dagger (x)k} computed slot by slot
DenseMatrix conjugate_replicated(const DenseMatrix& x, const DenseMatrix& u,
                                 int k);

struct McTwirl {
  DenseMatrix mean;
  double stderr_frobenius = 0;  // sqrt(sum of per-entry variances / M)
  int samples = 0;
};

McTwirl mc_twirl(const DenseMatrix& w, int n, int k, int samples,
                 std::uint64_t seed);

double commutator_residual(const OperatorExpansion& x, const RealMatrix& q,
                           int n, int k);
double commutator_residual(const DenseMatrix& x, const DenseMatrix& u, int k);

}  // namespace mgc
