#include "mgc/applications.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "mgc/clifford_matchgate.hpp"

namespace mgc {

namespace {

void check_nk(int n, int k) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k < 1) throw std::invalid_argument("k must be positive");
}

void check_state(const StateVec& psi, int* n_out) {
  auto size = static_cast<std::uint64_t>(psi.size());
  if (size < 2 || !std::has_single_bit(size)) throw DimensionError("state length must be 2^n, n >= 1");
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw std::invalid_argument("state is not normalized");
  *n_out = std::countr_zero(size);
}

McEstimate finish(double sum, double sum2, int samples) {
  McEstimate e;
  e.samples = samples;
  e.value = sum / samples;
  double var = samples > 1 ? (sum2 / samples - e.value * e.value) * samples / (samples - 1) : 0.0;
  e.stderr_ = std::sqrt(std::max(var, 0.0) / samples);
  return e;
}

HighestWeight zero_weight(int k) { return {k, std::vector<int>(k / 2, 0)}; }

}  // namespace

// ---------------------------------------------------------------------------

OperatorExpansion matchgate_twirl(const OperatorExpansion& w,
                                  const std::vector<GTBasisElement>& basis) {
  OperatorExpansion out(w.n(), w.k());
  for (const auto& e : basis) {
    if (e.op.n() != w.n() || e.op.k() != w.k()) throw DimensionError("basis and operator shapes differ");
    cplx c = hs_inner(e.op, w);
    if (std::abs(c) > 0) out += c * e.op;
  }
  return out;
}

OperatorExpansion matchgate_twirl(const OperatorExpansion& w, GTBasisOptions opt) {
  return matchgate_twirl(w, gt_basis(w.n(), w.k(), opt));
}

OperatorExpansion vacuum_projector(int n, int k) {
  check_nk(n, k);
  if (k < 2) throw std::invalid_argument("the vacuum projector needs k >= 2");
  return sector_projector(zero_weight(k), n, k);
}

BigRational vacuum_trace_exact(int n, int k) {
  check_nk(n, k);
  BigRational t = 2;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) t *= BigRational(k + 2 * n - i - j, 2 * n - i - j);
  return t;
}

double vacuum_trace(int n, int k) { return to_double(vacuum_trace_exact(n, k)); }

// ---------------------------------------------------------------------------

BigInt unitary_frame_potential_closed(int n, int k) { return commutant_dim(n, k); }

BigRational unitary_frame_potential_rmt(int n, int k) {
  check_nk(n, k);
  BigRational f = BigRational(BigInt(1) << (2 * k * n), 2);
  for (int j = 0; j < n; ++j)
    for (int t = 0; t < k; ++t) {
      // Gamma(k + 1/2 + j) / Gamma(1/2 + j) and Gamma(n + j) / Gamma(n + k + j)
      f *= BigRational(2 * (j + t) + 1, 2);
      f /= BigRational(n + j + t);
    }
  return f;
}

McEstimate unitary_frame_potential_mc(int n, int k, int samples, std::uint64_t seed) {
  check_nk(n, k);
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  check_dense_capacity(n);
  std::mt19937_64 rng(seed);
  double sum = 0, sum2 = 0;
  for (int s = 0; s < samples; ++s) {
    auto o = random_orthogonal(n, rng);
    double v = std::pow(std::abs(sample_unitary(o, n).trace()), 2 * k);
    sum += v;
    sum2 += v * v;
  }
  return finish(sum, sum2, samples);
}

BigRational state_frame_potential_closed(int n, int k, Ensemble e) {
  check_nk(n, k);
  if (e == Ensemble::Matchgate) return BigRational(1) / vacuum_trace_exact(n, k);
  if (k < 2) return 1;  // single copy: trace of a state
  if (k > 40) throw std::invalid_argument("k too large");
  // 2^{n(2-k)} / binom(2n,n) * binom(n + 2^{k-2} - 1, 2^{k-2} - 1)
  BigInt q = BigInt(1) << (k - 2);
  BigInt num = 1, den = 1;
  for (int i = 1; i <= n; ++i) {
    num *= q - 1 + i;
    den *= i;
  }
  BigRational f(num, den);
  f /= BigRational(binomial(2 * n, n));
  int e2 = n * (2 - k);
  if (e2 >= 0)
    f *= BigRational(BigInt(1) << e2);
  else
    f /= BigRational(BigInt(1) << (-e2));
  return f;
}

double state_frame_potential_selberg(int n, int k) {
  check_nk(n, k);
  long double lg = 0;
  for (int j = 0; j < n; ++j)
    lg += std::lgamma((n + j) / 2.0L) + std::lgamma((k + j + 1) / 2.0L) - std::lgamma((j + 1) / 2.0L) -
          std::lgamma((n + k + j) / 2.0L);
  return static_cast<double>(0.5L * std::exp(lg));
}

McEstimate state_frame_potential_mc(int n, int k, Ensemble e, int samples, std::uint64_t seed) {
  check_nk(n, k);
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  check_dense_capacity(n);
  std::mt19937_64 rng(seed);
  double sum = 0, sum2 = 0;
  for (int s = 0; s < samples; ++s) {
    DenseMatrix u;
    if (e == Ensemble::Matchgate) {
      u = sample_unitary(random_orthogonal(n, rng), n);
    } else {
      std::vector<int> perm(2 * n);
      for (int i = 0; i < 2 * n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      RealMatrix q = RealMatrix::Zero(2 * n, 2 * n);
      for (int mu = 0; mu < 2 * n; ++mu) q(perm[mu], mu) = rng() & 1 ? -1.0 : 1.0;
      u = unitary_from_orthogonal(q, n);
    }
    double v = std::pow(std::abs(u(0, 0)), 2 * k);
    sum += v;
    sum2 += v * v;
  }
  return finish(sum, sum2, samples);
}

BigRational design_gap_exact(int n) {
  BigRational mg = state_frame_potential_closed(n, 4, Ensemble::Matchgate);
  BigRational cm = state_frame_potential_closed(n, 4, Ensemble::CliffordMatchgate);
  BigRational d = (cm - mg) / mg;
  return d < 0 ? BigRational(-d) : d;
}

double design_gap(int n) { return to_double(design_gap_exact(n)); }

// ---------------------------------------------------------------------------

OperatorExpansion q4_operator(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n > 4) throw CapacityError("Q4 expansion has 4^n terms; gated to n <= 4");
  OperatorExpansion shape(n, 4);
  std::vector<Term> terms;
  for (std::uint64_t s = 0; s < (1ULL << (2 * n)); ++s) terms.push_back({shape.pack({s, s, s, s}), 1.0});
  return OperatorExpansion::from_terms(n, 4, std::move(terms));
}

OperatorExpansion q4_pauli_operator(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  check_dense_capacity(4 * n);
  DenseMatrix pauli[4];
  pauli[0] = DenseMatrix::Identity(2, 2);
  pauli[1] = DenseMatrix::Zero(2, 2);
  pauli[1] << 0, 1, 1, 0;
  pauli[2] = DenseMatrix::Zero(2, 2);
  pauli[2] << 0, cplx(0, -1), cplx(0, 1), 0;
  pauli[3] = DenseMatrix::Zero(2, 2);
  pauli[3] << 1, 0, 0, -1;
  std::size_t dim = std::size_t{1} << (4 * n);
  DenseMatrix q = DenseMatrix::Zero(dim, dim);
  for (std::uint64_t code = 0; code < (1ULL << (2 * n)); ++code) {
    DenseMatrix p = DenseMatrix::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
      DenseMatrix f = pauli[(code >> (2 * j)) & 3];
      DenseMatrix next(p.rows() * 2, p.cols() * 2);
      for (int a = 0; a < p.rows(); ++a)
        for (int b = 0; b < p.cols(); ++b) next.block(2 * a, 2 * b, 2, 2) = p(a, b) * f;
      p = std::move(next);
    }
    DenseMatrix p2(p.rows() * p.rows(), p.cols() * p.cols());
    for (int a = 0; a < p.rows(); ++a)
      for (int b = 0; b < p.cols(); ++b) p2.block(a * p.rows(), b * p.cols(), p.rows(), p.cols()) = p(a, b) * p;
    for (int a = 0; a < p2.rows(); ++a)
      for (int b = 0; b < p2.cols(); ++b)
        if (p2(a, b) != cplx(0, 0)) q.block(a * p2.rows(), b * p2.cols(), p2.rows(), p2.cols()) += p2(a, b) * p2;
  }
  return from_dense(q, n, 4);
}

double sre_annealed_closed(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  // log2 C_{n+1} - n, with C_{n+1} exact
  BigInt c = catalan(n + 1);
  double lc = 0;
  while (c > BigInt(1) << 60) {
    c >>= 1;
    lc += 1;
  }
  return lc + std::log2(c.convert_to<double>()) - n;
}

double trace_p0_q4(int n) {
  return std::real(hs_inner(vacuum_projector(n, 4), q4_operator(n)));
}

double sre_annealed_direct(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (n > 2) throw CapacityError("direct SRE route needs the k = 4 basis; gated to n <= 2");
  auto twirled = matchgate_twirl(vacuum_state(n, 4));
  double t = std::real(hs_inner(twirled, q4_operator(n)));
  return -std::log2(t / std::pow(2.0, n));
}

double sre_asymptotic(int n, bool with_inverse_n_term) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  double v = n + 2 - 1.5 * std::log2(n) - 0.5 * std::log2(std::numbers::pi);
  if (with_inverse_n_term) v -= 21.0 / (8.0 * std::numbers::ln2 * n);
  return v;
}

// ---------------------------------------------------------------------------

namespace {

void check_definetti(int n, int k, int l) {
  check_nk(n, k);
  if (l < 1 || l >= k) throw std::invalid_argument("need 1 <= l < k");
}

}  // namespace

BigRational definetti_bound_exact(int n, int k, int l) {
  check_definetti(n, k, l);
  return BigRational(BigInt(l) * n * (n - 1), k + 1);
}

BigRational definetti_ratio_exact(int n, int k, int l) {
  check_definetti(n, k, l);
  BigRational r = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) r *= BigRational(1) - BigRational(l, k + 2 * n - i - j);
  return r;
}

double definetti_bound(int n, int k, int l) { return to_double(definetti_bound_exact(n, k, l)); }
double definetti_ratio(int n, int k, int l) { return to_double(definetti_ratio_exact(n, k, l)); }

// ---------------------------------------------------------------------------

RealMatrix covariance_matrix(const StateVec& psi) {
  int n = 0;
  check_state(psi, &n);
  check_dense_capacity(n);
  std::vector<StateVec> g;
  for (int mu = 1; mu <= 2 * n; ++mu) g.push_back(jw_gamma(mu, n) * psi);
  RealMatrix m = RealMatrix::Zero(2 * n, 2 * n);
  for (int a = 0; a < 2 * n; ++a)
    for (int b = a + 1; b < 2 * n; ++b) {
      // <gamma_a gamma_b> = (gamma_a psi)^dagger (gamma_b psi), purely imaginary
      cplx z = g[a].dot(g[b]);
      m(a, b) = std::real(cplx(0, -1) * z);
      m(b, a) = -m(a, b);
    }
  return m;
}

double faf(const StateVec& psi, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  RealMatrix m = covariance_matrix(psi);
  int n = static_cast<int>(m.rows()) / 2;
  RealMatrix s = m.transpose() * m;
  RealMatrix p = RealMatrix::Identity(s.rows(), s.cols());
  for (int i = 0; i < k; ++i) p = p * s;
  return n - 0.5 * p.trace();
}

double phi_w(const OperatorExpansion& w, const StateVec& psi) {
  int n = 0;
  check_state(psi, &n);
  if (w.n() != n) throw DimensionError("operator and state sizes differ");
  check_dense_capacity(n);
  std::unordered_map<std::uint64_t, double> expect;
  auto ev = [&](std::uint64_t mask) {
    auto it = expect.find(mask);
    if (it != expect.end()) return it->second;
    double v = std::real(psi.dot(string_matrix(mask, n) * psi));
    expect.emplace(mask, v);
    return v;
  };
  cplx total = 0;
  for (const Term& t : w.terms()) {
    double prod = 1;
    for (int r = 0; r < w.k() && prod != 0; ++r) prod *= ev(w.replica_mask(t.key, r));
    total += t.c * prod;
  }
  return std::real(total);
}

double phi0(const StateVec& psi, int k, Phi0Route route) {
  int n = 0;
  check_state(psi, &n);
  if (k < 2) throw std::invalid_argument("phi0 needs k >= 2");
  if (route == Phi0Route::Auto) {
    bool symbolic_ok = k <= 5 && 2 * n * (k - 1) <= GTBasisOptions{}.max_support_bits;
    route = symbolic_ok ? Phi0Route::Symbolic : Phi0Route::Dense;
  }
  if (route == Phi0Route::Symbolic) {
    if (k > 5) throw UnsupportedError("symbolic trivial-sector projector covers k <= 5");
    return phi_w(vacuum_projector(n, k), psi);
  }
  check_dense_capacity(n * k);
  // eigenvectors of the dense quadratic Casimir with eigenvalue 0
  DenseMatrix c = to_dense(casimir({k, 1, CasimirKind::Quadratic}, n, k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
  StateVec big = psi;
  for (int r = 1; r < k; ++r) {
    StateVec next(big.size() * psi.size());
    for (Eigen::Index a = 0; a < big.size(); ++a) next.segment(a * psi.size(), psi.size()) = big(a) * psi;
    big = std::move(next);
  }
  double total = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < 0.5) total += std::norm(es.eigenvectors().col(i).dot(big));
  return total;
}

double gaussianity_residual(const StateVec& psi) {
  int n = 0;
  check_state(psi, &n);
  check_dense_capacity(2 * n);
  Eigen::Index d = psi.size();
  StateVec out = StateVec::Zero(d * d);
  for (int mu = 1; mu <= 2 * n; ++mu) {
    StateVec g = jw_gamma(mu, n) * psi;
    for (Eigen::Index a = 0; a < d; ++a) out.segment(a * d, d) += g(a) * g;
  }
  return out.norm();
}

// ---------------------------------------------------------------------------

std::vector<std::pair<int, double>> shadow_inverse_channel(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  std::vector<std::pair<int, double>> out;
  for (int l = 0; l <= n; ++l)
    out.push_back({2 * l, to_double(BigRational(binomial(2 * n, 2 * l), binomial(n, l)))});
  return out;
}

OperatorExpansion computational_diagonal(int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  // 2^{-n} sum_T Z_T (x) Z_T with Z_j = -gamma_{2j-1,2j}; the signs square away
  OperatorExpansion shape(n, 2);
  std::vector<Term> terms;
  double c = std::pow(2.0, -n);
  for (std::uint64_t t = 0; t < (1ULL << n); ++t) {
    std::uint64_t mask = 0;
    for (int j = 0; j < n; ++j)
      if (t >> j & 1) mask |= 3ULL << (2 * j);
    terms.push_back({shape.pack({mask, mask}), c});
  }
  return OperatorExpansion::from_terms(n, 2, std::move(terms));
}

OperatorExpansion contract_first(const OperatorExpansion& x, const OperatorExpansion& a) {
  if (x.k() != 2 || a.k() != 1 || x.n() != a.n()) throw DimensionError("need a 2-replica x and 1-replica a");
  int n = x.n();
  double scale = std::pow(2.0, n);
  std::vector<Term> terms;
  for (const Term& t : x.terms()) {
    cplx ca = a.coeff(x.replica_mask(t.key, 0));
    if (ca == cplx(0, 0)) continue;
    terms.push_back({x.replica_mask(t.key, 1), scale * ca * t.c});
  }
  return OperatorExpansion::from_terms(n, 1, std::move(terms));
}

OperatorExpansion shadow_channel(const OperatorExpansion& rho) {
  if (rho.k() != 1) throw DimensionError("shadow channel acts on one replica");
  auto twirled = matchgate_twirl(computational_diagonal(rho.n()));
  return contract_first(twirled, rho);
}

OperatorExpansion apply_shadow_inverse(const OperatorExpansion& x) {
  if (x.k() != 1) throw DimensionError("shadow inverse acts on one replica");
  auto eig = shadow_inverse_channel(x.n());
  std::vector<Term> terms;
  for (const Term& t : x.terms()) {
    int w = std::popcount(t.key);
    if (w % 2) continue;
    terms.push_back({t.key, eig[w / 2].second * t.c});
  }
  return OperatorExpansion::from_terms(x.n(), 1, std::move(terms));
}

}  // namespace mgc
