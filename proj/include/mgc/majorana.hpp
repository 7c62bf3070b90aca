#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mgc {

using cplx = std::complex<double>;
using Key = std::uint64_t;
using RealMatrix = Eigen::MatrixXd;

// drop |c| below this after floating arithmetic
inline constexpr double kPruneTol = 1e-12;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConstructionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Subset of the 2n modes. Mode mu (1-based) lives at bit mu-1.
struct MajoranaString {
  std::uint64_t mask = 0;

  static MajoranaString from_modes(const std::vector<int>& modes);
  std::vector<int> modes() const;
  int weight() const;
  bool operator==(const MajoranaString&) const = default;
};

// gamma_a * gamma_b = c * gamma_{a xor b}, canonical phases on all three.
std::pair<MajoranaString, cplx> string_product(MajoranaString a,
                                               MajoranaString b, int n);

// i^e with e in 0..3, the exponent part of string_product
int string_product_phase(std::uint64_t a, std::uint64_t b);

struct Term {
  Key key;
  cplx c;
};

// Sparse expansion over replicated canonical strings. Replica 1 occupies the
// most significant 2n bits of the key so that key order is lexicographic
// order on the concatenated masks.
class OperatorExpansion {
 public:
  OperatorExpansion() = default;
  OperatorExpansion(int n, int k);

  static OperatorExpansion identity(int n, int k);
  static OperatorExpansion from_terms(int n, int k, std::vector<Term> terms);
  static OperatorExpansion single(int n, int k,
                                  const std::vector<std::uint64_t>& masks,
                                  cplx c = 1.0);

  int n() const { return n_; }
  int k() const { return k_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  cplx coeff(Key key) const;
  cplx coeff(const std::vector<std::uint64_t>& masks) const;

  Key pack(const std::vector<std::uint64_t>& masks) const;
  std::vector<std::uint64_t> unpack(Key key) const;
  std::uint64_t replica_mask(Key key, int replica) const;  // replica 0-based

  OperatorExpansion& operator+=(const OperatorExpansion& o);
  OperatorExpansion& operator-=(const OperatorExpansion& o);
  OperatorExpansion& operator*=(cplx s);

  // squared coefficient norm sum |c|^2 (hs norm^2 is 2^{nk} times this)
  double coeff_norm2() const;
  double max_abs() const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<Term> terms_;  // sorted by key, no zero entries
};

OperatorExpansion operator+(OperatorExpansion a, const OperatorExpansion& b);
OperatorExpansion operator-(OperatorExpansion a, const OperatorExpansion& b);
OperatorExpansion operator*(cplx s, OperatorExpansion a);

OperatorExpansion op_multiply(const OperatorExpansion& a,
                              const OperatorExpansion& b);
OperatorExpansion commutator(const OperatorExpansion& a,
                             const OperatorExpansion& b);
cplx hs_inner(const OperatorExpansion& a, const OperatorExpansion& b);
double hs_norm(const OperatorExpansion& a);
OperatorExpansion op_adjoint(const OperatorExpansion& a);
cplx op_trace(const OperatorExpansion& a);
// max |coefficient difference|
double max_coeff_diff(const OperatorExpansion& a, const OperatorExpansion& b);

std::map<std::vector<int>, OperatorExpansion> weight_sector(
    const OperatorExpansion& a);

struct SignedPermutation {
  std::vector<int> perm;   // perm[mu-1] = image of mode mu, 1-based
  std::vector<int> signs;  // +1 / -1 per mode

  static SignedPermutation identity(int n);
  void validate(int n) const;
};

OperatorExpansion apply_signed_permutation(const OperatorExpansion& a,
                                           const SignedPermutation& sp);

// gamma_mu -> sum_nu Q(nu,mu) gamma_nu on every replica
OperatorExpansion apply_orthogonal(const OperatorExpansion& a,
                                   const RealMatrix& q);

OperatorExpansion parity_operator(int n);

// Operator acting as `op` (k=1) on one replica, identity elsewhere.
OperatorExpansion embed(const OperatorExpansion& op, int replica, int k);
// Tensor product of single-replica operators.
OperatorExpansion tensor(const std::vector<OperatorExpansion>& ops);

// Projector onto the computational vacuum of one replica, prod_j (1+Z_j)/2.
OperatorExpansion vacuum_state(int n);
// |0><0|^{otimes k}
OperatorExpansion vacuum_state(int n, int k);

}  // namespace mgc
