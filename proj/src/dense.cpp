#include "mgc/dense.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <string>
#include <unordered_map>

#include <unsupported/Eigen/MatrixFunctions>

namespace mgc {

std::size_t max_dense_dim() {
  if (const char* env = std::getenv("MGC_MAX_DENSE_DIM")) {
    try {
      long long v = std::stoll(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return 4096;
}

void check_dense_capacity(int qubits) {
  if (qubits > 40 || (std::size_t{1} << qubits) > max_dense_dim())
    throw CapacityError("dense dimension 2^" + std::to_string(qubits) +
                        " exceeds the dense capacity gate");
}

namespace {

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DenseMatrix pauli(char p) {
  DenseMatrix m(2, 2);
  const cplx i1{0, 1};
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i1, i1, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1;
  }
  return m;
}

// single-replica canonical string as a monomial matrix:
// gamma_S[r, r ^ x] = phase * (-1)^{popcount(z & r)}
struct Monomial {
  std::uint64_t x = 0, z = 0;
  cplx phase;
};

Monomial monomial_of(std::uint64_t mask, int n) {
  DenseMatrix g = string_matrix(mask, n);
  Monomial m;
  std::uint64_t d = std::uint64_t{1} << n;
  for (std::uint64_t c = 0; c < d; ++c)
    if (std::abs(g(0, c)) > 0.5) m.x = c;
  m.phase = g(0, m.x);
  for (int q = 0; q < n; ++q) {
    std::uint64_t r = std::uint64_t{1} << q;
    if (std::real(g(r, r ^ m.x) / m.phase) < 0) m.z |= r;
  }
  return m;
}

const std::vector<Monomial>& monomial_table(int n) {
  thread_local std::unordered_map<int, std::vector<Monomial>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<Monomial> tab(std::size_t{1} << (2 * n));
  for (std::uint64_t s = 0; s < tab.size(); ++s) tab[s] = monomial_of(s, n);
  return cache.emplace(n, std::move(tab)).first->second;
}

void check_square(const DenseMatrix& m, int qubits) {
  Eigen::Index d = Eigen::Index{1} << qubits;
  if (m.rows() != d || m.cols() != d)
    throw DimensionError("dense matrix has the wrong dimension");
}

// M <- (1 (x) U (x) 1) M with U on tensor slot `slot` of size d
void left_slot(DenseMatrix& m, const DenseMatrix& u, int slot, int k) {
  Eigen::Index d = u.rows();
  Eigen::Index stride = 1;
  for (int a = slot + 1; a < k; ++a) stride *= d;
  Eigen::Index blocks = m.rows() / (d * stride);
  DenseMatrix g(d, m.cols());
  for (Eigen::Index hi = 0; hi < blocks; ++hi)
    for (Eigen::Index lo = 0; lo < stride; ++lo) {
      Eigen::Index base = hi * d * stride + lo;
      for (Eigen::Index i = 0; i < d; ++i) g.row(i) = m.row(base + i * stride);
      g = (u * g).eval();
      for (Eigen::Index i = 0; i < d; ++i) m.row(base + i * stride) = g.row(i);
    }
}

// M <- M (1 (x) V (x) 1)
void right_slot(DenseMatrix& m, const DenseMatrix& v, int slot, int k) {
  Eigen::Index d = v.rows();
  Eigen::Index stride = 1;
  for (int a = slot + 1; a < k; ++a) stride *= d;
  Eigen::Index blocks = m.cols() / (d * stride);
  Eigen::MatrixXcd h(m.rows(), d);
  for (Eigen::Index hi = 0; hi < blocks; ++hi)
    for (Eigen::Index lo = 0; lo < stride; ++lo) {
      Eigen::Index base = hi * d * stride + lo;
      for (Eigen::Index i = 0; i < d; ++i) h.col(i) = m.col(base + i * stride);
      h = (h * v).eval();
      for (Eigen::Index i = 0; i < d; ++i) m.col(base + i * stride) = h.col(i);
    }
}

}  // namespace

DenseMatrix jw_gamma(int mu, int n) {
  if (n < 1 || mu < 1 || mu > 2 * n)
    throw std::out_of_range("Majorana index out of range");
  int site = (mu + 1) / 2;  // 1-based qubit, qubit 1 is the leading factor
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (int q = 1; q <= n; ++q) {
    char p = q < site ? 'Z' : q == site ? (mu % 2 ? 'X' : 'Y') : 'I';
    out = kron(out, pauli(p));
  }
  return out;
}

DenseMatrix string_matrix(std::uint64_t mask, int n) {
  Eigen::Index d = Eigen::Index{1} << n;
  DenseMatrix out = DenseMatrix::Identity(d, d);
  int r = 0;
  for (int b = 0; b < 2 * n; ++b)
    if (mask >> b & 1) {
      out = out * jw_gamma(b + 1, n);
      ++r;
    }
  if (mask >> (2 * n)) throw DimensionError("mask has modes beyond 2n");
  // i^{r(r-1)/2}
  static const cplx ph[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return ph[(r * (r - 1) / 2) & 3] * out;
}

DenseMatrix to_dense(const OperatorExpansion& a) {
  int n = a.n(), k = a.k();
  check_dense_capacity(n * k);
  const auto& tab = monomial_table(n);
  std::uint64_t dim = std::uint64_t{1} << (n * k);
  std::uint64_t dl = (std::uint64_t{1} << n) - 1;
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (const Term& t : a.terms()) {
    std::uint64_t x = 0, z = 0;
    cplx ph = t.c;
    for (int l = 0; l < k; ++l) {
      const Monomial& m = tab[a.replica_mask(t.key, l)];
      x = (x << n) | m.x;
      z = (z << n) | m.z;
      ph *= m.phase;
    }
    (void)dl;
    for (std::uint64_t r = 0; r < dim; ++r)
      out(r, r ^ x) += (std::popcount(z & r) & 1) ? -ph : ph;
  }
  return out;
}

OperatorExpansion from_dense(const DenseMatrix& m, int n, int k) {
  int q = n * k;
  check_dense_capacity(q);
  check_square(m, q);
  const auto& tab = monomial_table(n);
  // (x, z) of one replica -> canonical string
  std::vector<std::uint64_t> by_xz(std::size_t{1} << (2 * n));
  for (std::uint64_t s = 0; s < tab.size(); ++s)
    by_xz[(tab[s].x << n) | tab[s].z] = s;

  std::uint64_t dim = std::uint64_t{1} << q;
  std::uint64_t dl = (std::uint64_t{1} << n) - 1;
  std::vector<Term> terms;
  std::vector<cplx> f(dim);
  for (std::uint64_t x = 0; x < dim; ++x) {
    for (std::uint64_t r = 0; r < dim; ++r) f[r] = m(r ^ x, r);
    // Walsh-Hadamard: f[z] = sum_r (-1)^{z.r} M[r^x, r]
    for (std::uint64_t h = 1; h < dim; h <<= 1)
      for (std::uint64_t i = 0; i < dim; i += 2 * h)
        for (std::uint64_t j = i; j < i + h; ++j) {
          cplx u = f[j], v = f[j + h];
          f[j] = u + v;
          f[j + h] = u - v;
        }
    for (std::uint64_t z = 0; z < dim; ++z) {
      if (std::abs(f[z]) < kPruneTol) continue;
      Key key = 0;
      cplx ph = 1.0;
      for (int l = 0; l < k; ++l) {
        int shift = n * (k - 1 - l);
        std::uint64_t xl = (x >> shift) & dl, zl = (z >> shift) & dl;
        std::uint64_t s = by_xz[(xl << n) | zl];
        key = (key << (2 * n)) | s;
        ph *= tab[s].phase;
      }
      // Tr(gamma_S M) = phase * f[z]; gamma_S Hermitian so c = Tr(gamma_S M)/dim
      terms.push_back({key, ph * f[z] / static_cast<double>(dim)});
    }
  }
  return OperatorExpansion::from_terms(n, k, std::move(terms));
}

DenseMatrix gaussian_unitary(const GaussianGenerator& g, int n) {
  int m = 2 * n;
  if (g.kmat.rows() != m || g.kmat.cols() != m)
    throw DimensionError("generator must be 2n x 2n");
  if ((g.kmat + g.kmat.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("generator is not antisymmetric");
  check_dense_capacity(n);
  Eigen::Index d = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  std::vector<DenseMatrix> gam;
  for (int mu = 1; mu <= m; ++mu) gam.push_back(jw_gamma(mu, n));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && g.kmat(a, b) != 0.0) h += 0.25 * g.kmat(a, b) * gam[a] * gam[b];
  Eigen::MatrixXcd u = h.exp();
  return u;
}

DenseMatrix reflection_unitary(int n) {
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (int q = 1; q <= n; ++q) out = kron(out, pauli(q == n ? 'X' : 'I'));
  return out;
}

RealMatrix reflection_orthogonal(int n) {
  RealMatrix r = RealMatrix::Identity(2 * n, 2 * n);
  r(2 * n - 1, 2 * n - 1) = -1;
  return r;
}

RealMatrix induced_orthogonal(const DenseMatrix& u, int n) {
  int m = 2 * n;
  check_square(u, n);
  std::vector<DenseMatrix> gam;
  for (int mu = 1; mu <= m; ++mu) gam.push_back(jw_gamma(mu, n));
  RealMatrix q(m, m);
  double d = std::ldexp(1.0, n);
  for (int mu = 0; mu < m; ++mu) {
    DenseMatrix img = u * gam[mu] * u.adjoint();
    for (int nu = 0; nu < m; ++nu) q(nu, mu) = std::real((gam[nu] * img).trace()) / d;
  }
  return q;
}

DenseMatrix unitary_from_orthogonal(const RealMatrix& q, int n) {
  int m = 2 * n;
  if (q.rows() != m || q.cols() != m) throw DimensionError("Q must be 2n x 2n");
  if ((q.transpose() * q - RealMatrix::Identity(m, m)).norm() > 1e-10)
    throw std::invalid_argument("matrix is not orthogonal");
  bool reflected = q.determinant() < 0;
  RealMatrix a = reflected ? RealMatrix(q * reflection_orthogonal(n)) : q;

  // reduce to the identity with left Givens rotations G_N ... G_1 A = 1,
  // so A = G_1^T ... G_N^T and U = U(G_1^T) ... U(G_N^T)
  Eigen::Index d = Eigen::Index{1} << n;
  DenseMatrix u = DenseMatrix::Identity(d, d);
  std::vector<DenseMatrix> gam;
  for (int mu = 1; mu <= m; ++mu) gam.push_back(jw_gamma(mu, n));
  for (int j = 0; j < m - 1; ++j)
    for (int i = m - 1; i > j; --i) {
      double x = a(j, j), y = a(i, j);
      double r = std::hypot(x, y);
      if (r < 1e-300 || std::abs(y) < 1e-300) continue;
      double c = x / r, s = y / r;
      for (int col = 0; col < m; ++col) {
        double aj = a(j, col), ai = a(i, col);
        a(j, col) = c * aj + s * ai;
        a(i, col) = -s * aj + c * ai;
      }
      // G^T maps gamma_j -> c gamma_j + s gamma_i
      double theta = std::atan2(s, c);
      DenseMatrix g = std::cos(theta / 2) * DenseMatrix::Identity(d, d) +
                      std::sin(theta / 2) * (gam[i] * gam[j]);
      u = u * g;
    }
  // a is now diag(1, ..., 1, +-1); det +1 forces the last entry to 1, but a
  // pivot can land on -1 when an entry was already -1 and no rotation ran
  for (int j = 0; j < m - 1; ++j)
    if (a(j, j) < 0) {
      // rotate (j, j+1) by pi: flips both signs
      DenseMatrix g = gam[j + 1] * gam[j];
      a(j, j) = -a(j, j);
      a(j + 1, j + 1) = -a(j + 1, j + 1);
      u = u * g;
    }
  if (reflected) u = u * reflection_unitary(n);
  return u;
}

OrthogonalSample random_orthogonal_component(int n, bool reflected,
                                             std::mt19937_64& rng) {
  int m = 2 * n;
  std::normal_distribution<double> normal(0.0, 1.0);
  RealMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  // right multiplication by the fixed reflection moves Haar between cosets
  bool is_reflected = q.determinant() < 0;
  if (is_reflected != reflected) q = q * reflection_orthogonal(n);

  OrthogonalSample s;
  s.q = q;
  s.reflected = reflected;
  RealMatrix rot = reflected ? RealMatrix(q * reflection_orthogonal(n)) : q;
  RealMatrix lg = rot.log();
  s.generator.kmat = 0.5 * (lg - lg.transpose());
  return s;
}

OrthogonalSample random_orthogonal(int n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  return random_orthogonal_component(n, coin(rng), rng);
}

OrthogonalSample random_orthogonal(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_orthogonal(n, rng);
}

DenseMatrix sample_unitary(const OrthogonalSample& s, int n) {
  DenseMatrix u = gaussian_unitary(s.generator, n);
  if (s.reflected) u = u * reflection_unitary(n);
  return u;
}

DenseMatrix conjugate_replicated(const DenseMatrix& x, const DenseMatrix& u,
                                 int k) {
  DenseMatrix out = x;
  DenseMatrix ud = u.adjoint();
  for (int a = 0; a < k; ++a) {
    left_slot(out, u, a, k);
    right_slot(out, ud, a, k);
  }
  return out;
}

McTwirl mc_twirl(const DenseMatrix& w, int n, int k, int samples,
                 std::uint64_t seed) {
  check_dense_capacity(n * k);
  check_square(w, n * k);
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  DenseMatrix sum = DenseMatrix::Zero(w.rows(), w.cols());
  Eigen::MatrixXd sum2 = Eigen::MatrixXd::Zero(w.rows(), w.cols());
  for (int s = 0; s < samples; ++s) {
    auto smp = random_orthogonal_component(n, s % 2 == 1, rng);
    DenseMatrix t = conjugate_replicated(w, sample_unitary(smp, n), k);
    sum += t;
    sum2 += t.cwiseAbs2();
  }
  McTwirl out;
  out.samples = samples;
  out.mean = sum / static_cast<double>(samples);
  Eigen::MatrixXd var = sum2 / static_cast<double>(samples) - out.mean.cwiseAbs2();
  out.stderr_frobenius = std::sqrt(std::max(0.0, var.sum()) / samples);
  return out;
}

double commutator_residual(const DenseMatrix& x, const DenseMatrix& u, int k) {
  DenseMatrix wx = x, xw = x;
  for (int a = 0; a < k; ++a) {
    left_slot(wx, u, a, k);
    right_slot(xw, u, a, k);
  }
  return (wx - xw).norm();
}

double commutator_residual(const OperatorExpansion& x, const RealMatrix& q,
                           int n, int k) {
  if (x.n() != n || x.k() != k) throw DimensionError("operator (n, k) mismatch");
  return commutator_residual(to_dense(x), unitary_from_orthogonal(q, n), k);
}

}  // namespace mgc
