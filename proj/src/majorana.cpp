#include "mgc/majorana.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

#include "accumulator.hpp"

namespace mgc {

namespace {

// i^{p(s)} with p(s) = s(s-1)/2, exponent mod 4
constexpr int kCanonicalPhase[8] = {0, 0, 1, 3, 2, 2, 3, 1};

inline int canon(int weight) { return kCanonicalPhase[weight & 7]; }

inline cplx ipow(int e) {
  switch (e & 3) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

// bit x of the result = parity of the bits of a strictly above x
inline std::uint64_t suffix_parity(std::uint64_t a) {
  std::uint64_t s = a >> 1;
  s ^= s >> 1;
  s ^= s >> 2;
  s ^= s >> 4;
  s ^= s >> 8;
  s ^= s >> 16;
  s ^= s >> 32;
  return s;
}

void check_same(const OperatorExpansion& a, const OperatorExpansion& b) {
  if (a.n() != b.n() || a.k() != b.k())
    throw DimensionError("operator expansions over different (n, k)");
}

std::uint64_t field_mask(int n) {
  return 2 * n >= 64 ? ~0ULL : ((1ULL << (2 * n)) - 1);
}

}  // namespace

MajoranaString MajoranaString::from_modes(const std::vector<int>& modes) {
  MajoranaString s;
  for (int mu : modes) {
    if (mu < 1 || mu > 64) throw std::out_of_range("mode index out of range");
    s.mask ^= 1ULL << (mu - 1);
  }
  return s;
}

std::vector<int> MajoranaString::modes() const {
  std::vector<int> out;
  for (int b = 0; b < 64; ++b)
    if (mask >> b & 1) out.push_back(b + 1);
  return out;
}

int MajoranaString::weight() const { return std::popcount(mask); }

int string_product_phase(std::uint64_t a, std::uint64_t b) {
  // ordered(a) ordered(b): each mode x of b passes the modes of a above x
  int swaps = std::popcount(suffix_parity(a) & b) & 1;
  int e = canon(std::popcount(a)) + canon(std::popcount(b)) -
          canon(std::popcount(a ^ b)) + 2 * swaps;
#ifdef MGC_MUTATE_STRING_PRODUCT
  if (a && b && a != b) e += 2;
#endif
  return e & 3;
}

std::pair<MajoranaString, cplx> string_product(MajoranaString a,
                                               MajoranaString b, int n) {
  std::uint64_t m = field_mask(n);
  if ((a.mask | b.mask) & ~m)
    throw std::out_of_range("string has modes beyond 2n");
  return {MajoranaString{a.mask ^ b.mask}, ipow(string_product_phase(a.mask, b.mask))};
}

// ---------------------------------------------------------------------------

OperatorExpansion::OperatorExpansion(int n, int k) : n_(n), k_(k) {
  if (n < 1 || k < 1) throw DimensionError("n and k must be positive");
  if (2 * n * k > 64)
    throw CapacityError("2nk > 64 modes does not fit a 64-bit key");
}

OperatorExpansion OperatorExpansion::identity(int n, int k) {
  OperatorExpansion op(n, k);
  op.terms_.push_back({0, 1.0});
  return op;
}

OperatorExpansion OperatorExpansion::from_terms(int n, int k,
                                                std::vector<Term> terms) {
  OperatorExpansion op(n, k);
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return a.key < b.key; });
  std::vector<Term> merged;
  merged.reserve(terms.size());
  for (const Term& t : terms) {
    if (!merged.empty() && merged.back().key == t.key)
      merged.back().c += t.c;
    else
      merged.push_back(t);
  }
  for (const Term& t : merged)
    if (std::abs(t.c) >= kPruneTol) op.terms_.push_back(t);
  return op;
}

OperatorExpansion OperatorExpansion::single(
    int n, int k, const std::vector<std::uint64_t>& masks, cplx c) {
  OperatorExpansion op(n, k);
  Key key = op.pack(masks);
  if (std::abs(c) >= kPruneTol) op.terms_.push_back({key, c});
  return op;
}

Key OperatorExpansion::pack(const std::vector<std::uint64_t>& masks) const {
  if (static_cast<int>(masks.size()) != k_)
    throw DimensionError("expected one mask per replica");
  std::uint64_t fm = field_mask(n_);
  Key key = 0;
  for (int a = 0; a < k_; ++a) {
    if (masks[a] & ~fm) throw DimensionError("mask has modes beyond 2n");
    key = (2 * n_ < 64 ? key << (2 * n_) : 0) | masks[a];
  }
  return key;
}

std::vector<std::uint64_t> OperatorExpansion::unpack(Key key) const {
  std::vector<std::uint64_t> out(k_);
  for (int a = 0; a < k_; ++a) out[a] = replica_mask(key, a);
  return out;
}

std::uint64_t OperatorExpansion::replica_mask(Key key, int replica) const {
  int shift = 2 * n_ * (k_ - 1 - replica);
  return (key >> shift) & field_mask(n_);
}

cplx OperatorExpansion::coeff(Key key) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), key,
      [](const Term& t, Key k) { return t.key < k; });
  if (it != terms_.end() && it->key == key) return it->c;
  return {};
}

cplx OperatorExpansion::coeff(const std::vector<std::uint64_t>& masks) const {
  return coeff(pack(masks));
}

namespace {

std::vector<Term> merge_terms(const std::vector<Term>& a,
                              const std::vector<Term>& b, cplx sb) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    Term t;
    if (j == b.size() || (i < a.size() && a[i].key < b[j].key)) {
      t = a[i++];
    } else if (i == a.size() || b[j].key < a[i].key) {
      t = {b[j].key, sb * b[j].c};
      ++j;
    } else {
      t = {a[i].key, a[i].c + sb * b[j].c};
      ++i;
      ++j;
    }
    if (std::abs(t.c) >= kPruneTol) out.push_back(t);
  }
  return out;
}

}  // namespace

OperatorExpansion& OperatorExpansion::operator+=(const OperatorExpansion& o) {
  check_same(*this, o);
  terms_ = merge_terms(terms_, o.terms_, 1.0);
  return *this;
}

OperatorExpansion& OperatorExpansion::operator-=(const OperatorExpansion& o) {
  check_same(*this, o);
  terms_ = merge_terms(terms_, o.terms_, -1.0);
  return *this;
}

OperatorExpansion& OperatorExpansion::operator*=(cplx s) {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const Term& t : terms_)
    if (std::abs(s * t.c) >= kPruneTol) out.push_back({t.key, s * t.c});
  terms_ = std::move(out);
  return *this;
}

double OperatorExpansion::coeff_norm2() const {
  double s = 0;
  for (const Term& t : terms_) s += std::norm(t.c);
  return s;
}

double OperatorExpansion::max_abs() const {
  double m = 0;
  for (const Term& t : terms_) m = std::max(m, std::abs(t.c));
  return m;
}

OperatorExpansion operator+(OperatorExpansion a, const OperatorExpansion& b) {
  a += b;
  return a;
}

OperatorExpansion operator-(OperatorExpansion a, const OperatorExpansion& b) {
  a -= b;
  return a;
}

OperatorExpansion operator*(cplx s, OperatorExpansion a) {
  a *= s;
  return a;
}

// ---------------------------------------------------------------------------

namespace {

// Per-term data reused across a product loop.
struct Prepared {
  Key key;
  Key suffix;  // replica-local suffix parities, packed
  int canon;   // sum of per-replica canonical exponents
};

std::vector<Prepared> prepare(const OperatorExpansion& a) {
  int n = a.n(), k = a.k();
  std::uint64_t fm = field_mask(n);
  std::vector<Prepared> out;
  out.reserve(a.size());
  for (const Term& t : a.terms()) {
    Prepared p{t.key, 0, 0};
    for (int r = 0; r < k; ++r) {
      int shift = 2 * n * (k - 1 - r);
      std::uint64_t f = (t.key >> shift) & fm;
      p.suffix |= (suffix_parity(f) & fm) << shift;
      p.canon += canon(std::popcount(f));
    }
    out.push_back(p);
  }
  return out;
}

inline int packed_canon(Key key, int n, int k, std::uint64_t fm) {
  int e = 0;
  for (int r = 0; r < k; ++r) e += canon(std::popcount((key >> (2 * n * r)) & fm));
  return e;
}

}  // namespace

OperatorExpansion op_multiply(const OperatorExpansion& a,
                              const OperatorExpansion& b) {
  check_same(a, b);
  int n = a.n(), k = a.k();
  OperatorExpansion out(n, k);
  if (a.empty() || b.empty()) return out;
  std::uint64_t fm = field_mask(n);
  auto pa = prepare(a);
  auto pb = prepare(b);
  detail::Accumulator acc(2 * n * k);
  const auto& ta = a.terms();
  const auto& tb = b.terms();
#ifdef MGC_MUTATE_STRING_PRODUCT
  // route every replica through the scalar kernel so the mutation applies
  for (std::size_t i = 0; i < ta.size(); ++i)
    for (std::size_t j = 0; j < tb.size(); ++j) {
      int e = 0;
      for (int r = 0; r < k; ++r)
        e += string_product_phase(a.replica_mask(ta[i].key, r),
                                  b.replica_mask(tb[j].key, r));
      acc.add(ta[i].key ^ tb[j].key, ipow(e) * ta[i].c * tb[j].c);
    }
  (void)pa;
  (void)pb;
  (void)fm;
#else
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const Prepared& x = pa[i];
    const cplx cx = ta[i].c;
    for (std::size_t j = 0; j < tb.size(); ++j) {
      const Prepared& y = pb[j];
      Key key = x.key ^ y.key;
      int e = x.canon + y.canon - packed_canon(key, n, k, fm) +
              2 * (std::popcount(x.suffix & y.key) & 1);
      acc.add(key, ipow(e) * cx * tb[j].c);
    }
  }
#endif
  out = OperatorExpansion::from_terms(n, k, acc.take());
  return out;
}

OperatorExpansion commutator(const OperatorExpansion& a,
                             const OperatorExpansion& b) {
  return op_multiply(a, b) - op_multiply(b, a);
}

cplx hs_inner(const OperatorExpansion& a, const OperatorExpansion& b) {
  check_same(a, b);
  cplx s{};
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  std::size_t i = 0, j = 0;
  while (i < ta.size() && j < tb.size()) {
    if (ta[i].key < tb[j].key)
      ++i;
    else if (tb[j].key < ta[i].key)
      ++j;
    else {
      s += std::conj(ta[i].c) * tb[j].c;
      ++i;
      ++j;
    }
  }
  return std::ldexp(1.0, a.n() * a.k()) * s;
}

double hs_norm(const OperatorExpansion& a) {
  return std::sqrt(std::ldexp(a.coeff_norm2(), a.n() * a.k()));
}

OperatorExpansion op_adjoint(const OperatorExpansion& a) {
  std::vector<Term> t = a.terms();
  for (Term& x : t) x.c = std::conj(x.c);
  return OperatorExpansion::from_terms(a.n(), a.k(), std::move(t));
}

cplx op_trace(const OperatorExpansion& a) {
  return std::ldexp(1.0, a.n() * a.k()) * a.coeff(Key{0});
}

double max_coeff_diff(const OperatorExpansion& a, const OperatorExpansion& b) {
  check_same(a, b);
  std::vector<Term> d;
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  double m = 0;
  std::size_t i = 0, j = 0;
  while (i < ta.size() || j < tb.size()) {
    if (j == tb.size() || (i < ta.size() && ta[i].key < tb[j].key))
      m = std::max(m, std::abs(ta[i++].c));
    else if (i == ta.size() || tb[j].key < ta[i].key)
      m = std::max(m, std::abs(tb[j++].c));
    else {
      m = std::max(m, std::abs(ta[i].c - tb[j].c));
      ++i;
      ++j;
    }
  }
  return m;
}

std::map<std::vector<int>, OperatorExpansion> weight_sector(
    const OperatorExpansion& a) {
  std::map<std::vector<int>, std::vector<Term>> parts;
  for (const Term& t : a.terms()) {
    std::vector<int> r(a.k());
    for (int l = 0; l < a.k(); ++l) r[l] = std::popcount(a.replica_mask(t.key, l));
    parts[r].push_back(t);
  }
  std::map<std::vector<int>, OperatorExpansion> out;
  for (auto& [r, terms] : parts)
    out.emplace(r, OperatorExpansion::from_terms(a.n(), a.k(), std::move(terms)));
  return out;
}

// ---------------------------------------------------------------------------

SignedPermutation SignedPermutation::identity(int n) {
  SignedPermutation sp;
  for (int mu = 1; mu <= 2 * n; ++mu) {
    sp.perm.push_back(mu);
    sp.signs.push_back(1);
  }
  return sp;
}

void SignedPermutation::validate(int n) const {
  int m = 2 * n;
  if (static_cast<int>(perm.size()) != m || static_cast<int>(signs.size()) != m)
    throw std::invalid_argument("signed permutation has wrong length");
  std::vector<bool> hit(m, false);
  for (int p : perm) {
    if (p < 1 || p > m || hit[p - 1])
      throw std::invalid_argument("not a permutation");
    hit[p - 1] = true;
  }
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +-1");
}

namespace {

// gamma_S -> c * gamma_{S'} under gamma_mu -> s_mu gamma_{pi(mu)}
std::pair<std::uint64_t, int> permute_string(std::uint64_t mask,
                                             const SignedPermutation& sp) {
  std::vector<int> img;
  int sign = 1;
  for (int b = 0; b < 64 && (mask >> b); ++b)
    if (mask >> b & 1) {
      img.push_back(sp.perm[b] - 1);
      sign *= sp.signs[b];
    }
  // sort the image with an inversion count; canonical prefactor |S| unchanged
  int inv = 0;
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = i + 1; j < img.size(); ++j)
      if (img[i] > img[j]) ++inv;
  std::uint64_t out = 0;
  for (int x : img) out |= 1ULL << x;
  return {out, (inv & 1) ? -sign : sign};
}

}  // namespace

OperatorExpansion apply_signed_permutation(const OperatorExpansion& a,
                                           const SignedPermutation& sp) {
  sp.validate(a.n());
  int n = a.n(), k = a.k();
  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, int>> cache;
  auto image = [&](std::uint64_t m) {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    auto r = permute_string(m, sp);
    cache.emplace(m, r);
    return r;
  };
  std::vector<Term> out;
  out.reserve(a.size());
  for (const Term& t : a.terms()) {
    Key key = 0;
    int sign = 1;
    for (int r = 0; r < k; ++r) {
      auto [m, s] = image(a.replica_mask(t.key, r));
      key = (key << (2 * n)) | m;
      sign *= s;
    }
    out.push_back({key, static_cast<double>(sign) * t.c});
  }
  return OperatorExpansion::from_terms(n, k, std::move(out));
}

namespace {

double minor_det(const RealMatrix& q, const std::vector<int>& rows,
                 const std::vector<int>& cols) {
  int r = static_cast<int>(rows.size());
  if (r == 0) return 1.0;
  RealMatrix m(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) m(i, j) = q(rows[i], cols[j]);
  return m.determinant();
}

std::vector<int> bits_of(std::uint64_t m) {
  std::vector<int> out;
  for (int b = 0; b < 64 && (m >> b); ++b)
    if (m >> b & 1) out.push_back(b);
  return out;
}

}  // namespace

OperatorExpansion apply_orthogonal(const OperatorExpansion& a,
                                   const RealMatrix& q) {
  int n = a.n(), k = a.k(), m = 2 * n;
  if (q.rows() != m || q.cols() != m)
    throw DimensionError("orthogonal matrix must be 2n x 2n");
  if ((q.transpose() * q - RealMatrix::Identity(m, m)).norm() > 1e-10)
    throw std::invalid_argument("matrix is not orthogonal");

  // gamma_S -> sum_T det(Q[T,S]) gamma_T; the canonical prefactor is the
  // same on both sides since |T| = |S|
  std::unordered_map<std::uint64_t, std::vector<std::pair<std::uint64_t, double>>> cache;
  std::vector<std::vector<std::uint64_t>> by_weight(m + 1);
  for (std::uint64_t t = 0; t < (1ULL << m); ++t)
    by_weight[std::popcount(t)].push_back(t);
  auto image = [&](std::uint64_t s) -> const std::vector<std::pair<std::uint64_t, double>>& {
    auto it = cache.find(s);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<std::uint64_t, double>> img;
    auto cols = bits_of(s);
    for (std::uint64_t t : by_weight[std::popcount(s)]) {
      double d = minor_det(q, bits_of(t), cols);
      if (std::abs(d) > 1e-15) img.push_back({t, d});
    }
    return cache.emplace(s, std::move(img)).first->second;
  };

  detail::Accumulator acc(2 * n * k);
  for (const Term& t : a.terms()) {
    std::vector<const std::vector<std::pair<std::uint64_t, double>>*> parts(k);
    for (int r = 0; r < k; ++r) parts[r] = &image(a.replica_mask(t.key, r));
    // cartesian product over replicas
    std::vector<std::size_t> idx(k, 0);
    bool done = false;
    for (int r = 0; r < k; ++r)
      if (parts[r]->empty()) done = true;
    while (!done) {
      Key key = 0;
      double c = 1.0;
      for (int r = 0; r < k; ++r) {
        const auto& e = (*parts[r])[idx[r]];
        key = (key << (2 * n)) | e.first;
        c *= e.second;
      }
      acc.add(key, c * t.c);
      int r = k - 1;
      while (r >= 0 && ++idx[r] == parts[r]->size()) idx[r--] = 0;
      if (r < 0) done = true;
    }
  }
  return OperatorExpansion::from_terms(n, k, acc.take());
}

OperatorExpansion parity_operator(int n) {
  // P = (-i)^n gamma_1 ... gamma_2n = (-i)^n i^{-p(2n)} gamma_{[2n]}
  int e = 3 * n - canon(2 * n);
  return OperatorExpansion::single(n, 1, {field_mask(n)}, ipow(e));
}

OperatorExpansion embed(const OperatorExpansion& op, int replica, int k) {
  if (op.k() != 1) throw DimensionError("embed expects a single-replica operator");
  if (replica < 0 || replica >= k) throw DimensionError("replica out of range");
  int n = op.n();
  std::vector<Term> out;
  for (const Term& t : op.terms())
    out.push_back({t.key << (2 * n * (k - 1 - replica)), t.c});
  return OperatorExpansion::from_terms(n, k, std::move(out));
}

OperatorExpansion tensor(const std::vector<OperatorExpansion>& ops) {
  if (ops.empty()) throw DimensionError("empty tensor product");
  int n = ops[0].n(), k = static_cast<int>(ops.size());
  std::vector<Term> cur{{0, 1.0}};
  for (const auto& op : ops) {
    if (op.k() != 1 || op.n() != n)
      throw DimensionError("tensor factors must be single-replica over the same n");
    std::vector<Term> next;
    next.reserve(cur.size() * op.size());
    for (const Term& a : cur)
      for (const Term& b : op.terms())
        next.push_back({(a.key << (2 * n)) | b.key, a.c * b.c});
    cur = std::move(next);
  }
  return OperatorExpansion::from_terms(n, k, std::move(cur));
}

OperatorExpansion vacuum_state(int n) {
  // Z_j = -gamma_{2j-1,2j} in the canonical convention
  OperatorExpansion rho = OperatorExpansion::identity(n, 1);
  for (int j = 0; j < n; ++j) {
    std::uint64_t pair = 3ULL << (2 * j);
    OperatorExpansion f = OperatorExpansion::from_terms(
        n, 1, {{0, 0.5}, {pair, -0.5}});
    rho = op_multiply(rho, f);
  }
  return rho;
}

OperatorExpansion vacuum_state(int n, int k) {
  return tensor(std::vector<OperatorExpansion>(k, vacuum_state(n)));
}

}  // namespace mgc
