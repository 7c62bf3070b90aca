#include "mgc/bridge_gt.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "chain.hpp"

namespace mgc {

namespace {

using detail::Label;

const cplx kI{0, 1};

void check_pair(int a, int b, int k) {
  if (a < 1 || b > k || a >= b)
    throw std::invalid_argument("bridge indices need 1 <= a < b <= k");
}

OperatorExpansion single_mode(int mu, int n) {
  return OperatorExpansion::single(n, 1, {1ULL << (mu - 1)});
}

// Operators of one (n, k) chain, built on first use.
class Chain {
 public:
  Chain(int n, int k) : n_(n), k_(k) {}

  int n() const { return n_; }
  int k() const { return k_; }

  const OperatorExpansion& bridge(int a, int b) {
    auto key = std::make_pair(a, b);
    auto it = bridges_.find(key);
    if (it == bridges_.end()) it = bridges_.emplace(key, bridge_operator(a, b, n_, k_)).first;
    return it->second;
  }

  // L_ab = B_ab / 2 extended antisymmetrically, 1-based
  OperatorExpansion half_generator(int a, int b) {
    if (a == b) return OperatorExpansion(n_, k_);
    if (a < b) return 0.5 * bridge(a, b);
    return -0.5 * bridge(b, a);
  }

  const OperatorExpansion& quadratic(int level) {
    auto it = quad_.find(level);
    if (it != quad_.end()) return it->second;
    OperatorExpansion c(n_, k_);
    for (int a = 1; a <= level; ++a)
      for (int b = a + 1; b <= level; ++b) c += op_multiply(bridge(a, b), bridge(a, b));
    c *= 0.25;
    return quad_.emplace(level, std::move(c)).first->second;
  }

  OperatorExpansion trace_power(int level, int j) {
    std::vector<std::vector<OperatorExpansion>> l(level, std::vector<OperatorExpansion>(level));
    for (int a = 0; a < level; ++a)
      for (int b = 0; b < level; ++b) l[a][b] = half_generator(a + 1, b + 1);
    auto m = l;
    for (int p = 2; p <= 2 * j; ++p) {
      std::vector<std::vector<OperatorExpansion>> next(
          level, std::vector<OperatorExpansion>(level, OperatorExpansion(n_, k_)));
      for (int a = 0; a < level; ++a)
        for (int b = 0; b < level; ++b)
          for (int c = 0; c < level; ++c)
            if (!m[a][c].empty() && !l[c][b].empty())
              next[a][b] += op_multiply(m[a][c], l[c][b]);
      m = std::move(next);
    }
    OperatorExpansion t(n_, k_);
    for (int a = 0; a < level; ++a) t += m[a][a];
    return t;
  }

  OperatorExpansion pfaffian(int level) {
    std::vector<int> idx;
    for (int a = 1; a <= level; ++a) idx.push_back(a);
    OperatorExpansion pf = pfaffian_rec(idx);
    // i^{level/2 mod 2} makes the spectrum real
    if ((level / 2) % 2 == 1) pf *= kI;
    return pf;
  }

  const OperatorExpansion& secondary(int level) {
    auto it = second_.find(level);
    if (it != second_.end()) return it->second;
    OperatorExpansion s;
    if (level == 4) {
      s = pfaffian(4);
    } else if (level == 5) {
      s = quartic5();
    } else {
      throw UnsupportedError("no secondary Casimir at this level");
    }
    return second_.emplace(level, std::move(s)).first->second;
  }

  // level-2 weight operator: (i/2) B_12 at the top of a k=2 chain (eigenvalue
  // nu), -(i/2) B_12 as the bottom of a longer chain (eigenvalue m)
  OperatorExpansion level2(bool top) { return (top ? 0.5 : -0.5) * kI * bridge(1, 2); }

  OperatorExpansion quartic5() {
    const auto& c2 = quadratic(5);
    OperatorExpansion t4 = trace_power(5, 2);
    OperatorExpansion q = -0.25 * t4;
    q += 0.5 * op_multiply(c2, c2);
    q -= 1.75 * c2;
    return q;
  }

 private:
  OperatorExpansion pfaffian_rec(const std::vector<int>& idx) {
    if (idx.empty()) return OperatorExpansion::identity(n_, k_);
    OperatorExpansion out(n_, k_);
    for (std::size_t j = 1; j < idx.size(); ++j) {
      std::vector<int> rest;
      for (std::size_t t = 1; t < idx.size(); ++t)
        if (t != j) rest.push_back(idx[t]);
      OperatorExpansion term = op_multiply(half_generator(idx[0], idx[j]), pfaffian_rec(rest));
      if (j % 2 == 0) term *= -1.0;
      out += term;
    }
    return out;
  }

  int n_, k_;
  std::map<std::pair<int, int>, OperatorExpansion> bridges_;
  std::map<int, OperatorExpansion> quad_;
  std::map<int, OperatorExpansion> second_;
};

Rational secondary_value(const Label& l, int level) {
  if (level == 4) return Rational(static_cast<long long>(l[1]) * (l[0] + 1));
  if (level == 5) {
    long long a = 2LL * l[0] + 3, b = 2LL * l[1] + 1;
    return Rational(a * a * b * b - 9, 16);
  }
  throw UnsupportedError("no secondary Casimir at this level");
}

Rational primary_value(const Label& l, int level) {
  if (level == 2) return Rational(l[0]);
  return detail::quadratic_value(l, level);
}

void check_k(int k) {
  if (k < 2) throw std::invalid_argument("k must be at least 2");
  if (k > 5) throw UnsupportedError("explicit Gelfand-Tsetlin construction covers k <= 5");
}

// Z <- (prod over other distinct values (C - c)/(t - c)) Z
OperatorExpansion lagrange(const OperatorExpansion& c, const Rational& target,
                           const std::set<Rational>& values, OperatorExpansion z) {
  for (const Rational& v : values) {
    if (v == target) continue;
    OperatorExpansion cz = op_multiply(c, z);
    cz -= to_double(v) * z;
    cz *= 1.0 / to_double(target - v);
    z = std::move(cz);
    if (z.empty()) break;
  }
  return z;
}

// Project the level-`level` label of Z onto `target`, given the labels that
// can occur there.
OperatorExpansion project_level(Chain& ch, OperatorExpansion z, int level,
                                const Label& target,
                                const std::vector<Label>& candidates) {
  bool top = level == ch.k();
  Rational t1 = primary_value(target, level);
  std::set<Rational> prim;
  for (const Label& c : candidates) prim.insert(primary_value(c, level));
  OperatorExpansion primary = level == 2 ? ch.level2(top) : ch.quadratic(level);
  z = lagrange(primary, t1, prim, std::move(z));

  if (level >= 4 && !z.empty()) {
    std::set<Rational> sec;
    for (const Label& c : candidates)
      if (primary_value(c, level) == t1) sec.insert(secondary_value(c, level));
    if (sec.size() > 1)
      z = lagrange(ch.secondary(level), secondary_value(target, level), sec, std::move(z));
  }
  return z;
}

const Label& label_at(const HighestWeight& w, const GTPattern& p, int level) {
  if (level == w.k) return w.parts;
  return p.labels[w.k - 1 - level];
}

OperatorExpansion projector_in(Chain& ch, const HighestWeight& w) {
  return project_level(ch, OperatorExpansion::identity(ch.n(), ch.k()), ch.k(), w.parts,
                       detail::top_labels(ch.n(), ch.k()));
}

// refine levels [from, 2] of Z to the labels of p
OperatorExpansion refine(Chain& ch, OperatorExpansion z, const HighestWeight& w,
                         const GTPattern& p, int from) {
  for (int level = from; level >= 2 && !z.empty(); --level) {
    const Label& parent = label_at(w, p, level + 1);
    z = project_level(ch, std::move(z), level, label_at(w, p, level),
                      detail::branch(parent, level + 1));
  }
  return z;
}

void check_pattern(const HighestWeight& w, const GTPattern& p) {
  auto all = gt_patterns(w);
  if (!std::binary_search(all.begin(), all.end(), p))
    throw std::invalid_argument("pattern " + p.str() + " is not in GT" + w.str());
}

void check_weight(const HighestWeight& w, int n, int k) {
  if (w.k != k || !is_valid_weight(w, n))
    throw std::invalid_argument("weight " + w.str() + " is not allowed at this (n, k)");
}

// unit HS norm, first coefficient real positive
OperatorExpansion normalize_phase(OperatorExpansion z) {
  double nrm = hs_norm(z);
  if (nrm == 0.0) return z;
  cplx first = z.terms().front().c;
  z *= std::conj(first) / std::abs(first) / nrm;
  return z;
}

struct Move {
  int level;  // the level whose label changes
  GTPattern to;
};

// shortest path of unit label changes, highest level first, toward the
// target component first
std::vector<Move> combinatorial_path(const HighestWeight& w, const GTPattern& from,
                                     const GTPattern& to) {
  auto all = gt_patterns(w);
  std::set<GTPattern> valid(all.begin(), all.end());
  std::map<GTPattern, std::pair<GTPattern, int>> parent;
  std::deque<GTPattern> queue{from};
  parent.emplace(from, std::make_pair(from, 0));
  int k = w.k;
  while (!queue.empty()) {
    GTPattern cur = queue.front();
    queue.pop_front();
    if (cur == to) break;
    for (int level = k - 1; level >= 2; --level) {
      int li = k - 1 - level;
      for (std::size_t c = 0; c < cur.labels[li].size(); ++c) {
        int want = to.labels[li][c] - cur.labels[li][c];
        int first = want < 0 ? -1 : 1;
        for (int d : {first, -first}) {
          GTPattern next = cur;
          next.labels[li][c] += d;
          if (!valid.count(next) || parent.count(next)) continue;
          parent.emplace(next, std::make_pair(cur, level));
          queue.push_back(next);
        }
      }
    }
  }
  if (!parent.count(to)) throw ConstructionError("no combinatorial path to " + to.str());
  std::vector<Move> path;
  for (GTPattern cur = to; cur != from;) {
    auto& [prev, level] = parent.at(cur);
    path.push_back({level, cur});
    cur = prev;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

std::string describe(const std::vector<Move>& path, const GTPattern& start) {
  std::ostringstream os;
  os << start.str();
  for (auto& m : path) os << " -B" << m.level << "," << m.level + 1 << "-> " << m.to.str();
  return os.str();
}

const double kZeroSandwich = 1e-9;

// numeric breadth-first search with every generator and full refinement
OperatorExpansion numeric_search(Chain& ch, const HighestWeight& w, const GTPattern& from,
                                 const GTPattern& to, const OperatorExpansion& start) {
  auto all = gt_patterns(w);
  std::map<GTPattern, OperatorExpansion> reached;
  std::deque<GTPattern> queue{from};
  reached.emplace(from, start);
  int k = w.k;
  while (!queue.empty()) {
    GTPattern cur = queue.front();
    queue.pop_front();
    if (cur == to) return reached.at(cur);
    for (int b = 2; b <= k; ++b)
      for (int a = 1; a < b; ++a) {
        OperatorExpansion y = op_multiply(ch.bridge(a, b), reached.at(cur));
        if (y.empty()) continue;
        for (const GTPattern& q : all) {
          if (reached.count(q)) continue;
          // B_ab keeps every label at level >= b
          bool same = true;
          for (int level = k - 1; level >= b; --level)
            if (label_at(w, q, level) != label_at(w, cur, level)) same = false;
          if (!same) continue;
          OperatorExpansion z = refine(ch, y, w, q, b - 1);
          if (hs_norm(z) > kZeroSandwich * hs_norm(y)) {
            reached.emplace(q, std::move(z));
            queue.push_back(q);
          }
        }
      }
  }
  throw ConstructionError("no nonzero elementary path");
}

OperatorExpansion transition_from(Chain& ch, const HighestWeight& w, const GTPattern& source,
                                  const GTPattern& target, const OperatorExpansion& p_target) {
  if (source == target) {
    OperatorExpansion x = p_target;
    return normalize_phase(x);
  }
  auto path = combinatorial_path(w, target, source);
  OperatorExpansion z = p_target;
  GTPattern cur = target;
  bool ok = true;
  for (const Move& m : path) {
    OperatorExpansion y = op_multiply(ch.bridge(m.level, m.level + 1), z);
    const Label& parent = label_at(w, m.to, m.level + 1);
    OperatorExpansion next = project_level(ch, y, m.level, label_at(w, m.to, m.level),
                                           detail::branch(parent, m.level + 1));
    if (hs_norm(next) <= kZeroSandwich * std::max(hs_norm(y), 1.0)) {
      ok = false;
      break;
    }
    z = std::move(next);
    cur = m.to;
  }
  if (!ok) {
    try {
      z = numeric_search(ch, w, target, source, p_target);
    } catch (const ConstructionError&) {
      throw ConstructionError("zero sandwich along " + describe(path, target) +
                              " and no alternative path for weight " + w.str());
    }
  }
  return normalize_phase(z);
}

}  // namespace

// ---------------------------------------------------------------------------

OperatorExpansion bridge_operator(int a, int b, int n, int k) {
  check_pair(a, b, k);
  OperatorExpansion parity = parity_operator(n);
  OperatorExpansion ip = kI * parity;
  OperatorExpansion out(n, k);
  for (int mu = 1; mu <= 2 * n; ++mu) {
    OperatorExpansion g = single_mode(mu, n);
    std::vector<OperatorExpansion> f(k, OperatorExpansion::identity(n, 1));
    f[a - 1] = op_multiply(g, parity);
    if (a % 2 == 0) f[a - 1] = op_multiply(ip, f[a - 1]);
    for (int c = a + 1; c < b; ++c) f[c - 1] = parity;
    f[b - 1] = b % 2 == 0 ? op_multiply(ip, g) : g;
    out += tensor(f);
  }
  return out;
}

OperatorExpansion plain_bilinear(int a, int b, int n, int k) {
  check_pair(a, b, k);
  OperatorExpansion out(n, k);
  for (int mu = 1; mu <= 2 * n; ++mu) {
    std::vector<std::uint64_t> masks(k, 0);
    masks[a - 1] = masks[b - 1] = 1ULL << (mu - 1);
    out += OperatorExpansion::single(n, k, masks);
  }
  return out;
}

namespace {

void check_spec(const CasimirSpec& s) {
  int m = s.level;
  if (m < 2) throw std::invalid_argument("Casimir level must be at least 2");
  switch (s.kind) {
    case CasimirKind::Quadratic:
      if (s.index != 1) throw std::invalid_argument("quadratic Casimir has index 1");
      break;
    case CasimirKind::TracePower:
      if (s.index < 1 || s.index > m / 2)
        throw std::invalid_argument("trace-power index must be in 1..level/2");
      break;
    case CasimirKind::Pfaffian:
      if (m % 2 != 0 || s.index != m / 2)
        throw std::invalid_argument("Pfaffian needs an even level and index level/2");
      break;
    case CasimirKind::Quartic:
      if (m != 5 || s.index != 2) throw std::invalid_argument("quartic Casimir is defined at level 5");
      break;
  }
}

}  // namespace

OperatorExpansion casimir(const CasimirSpec& spec, int n, int k) {
  check_spec(spec);
  if (spec.level > k) throw std::invalid_argument("Casimir level exceeds k");
  Chain ch(n, k);
  switch (spec.kind) {
    case CasimirKind::Quadratic: return ch.quadratic(spec.level);
    case CasimirKind::TracePower: return ch.trace_power(spec.level, spec.index);
    case CasimirKind::Pfaffian: return ch.pfaffian(spec.level);
    case CasimirKind::Quartic: return ch.quartic5();
  }
  return {};
}

Rational casimir_eigenvalue_exact(const HighestWeight& w, const CasimirSpec& spec) {
  check_spec(spec);
  if (w.k != spec.level) throw std::invalid_argument("weight and Casimir level differ");
  if (static_cast<int>(w.parts.size()) != w.k / 2) throw std::invalid_argument("malformed weight");
  const Label& l = w.parts;
  Rational c2 = detail::quadratic_value(l, w.k);
  switch (spec.kind) {
    case CasimirKind::Quadratic: return c2;
    case CasimirKind::TracePower:
      if (spec.index == 1) return Rational(-2) * c2;
      if (w.k == 5 && spec.index == 2)
        return Rational(-4) * secondary_value(l, 5) + Rational(2) * c2 * c2 - Rational(7) * c2;
      throw UnsupportedError("trace-power eigenvalue only calibrated for index 1 and (level 5, index 2)");
    case CasimirKind::Pfaffian:
      if (w.k == 2) return Rational(l[0]);
      if (w.k == 4) return secondary_value(l, 4);
      throw UnsupportedError("Pfaffian eigenvalue only for levels 2 and 4");
    case CasimirKind::Quartic: return secondary_value(l, 5);
  }
  return {};
}

double casimir_eigenvalue(const HighestWeight& w, const CasimirSpec& spec) {
  return to_double(casimir_eigenvalue_exact(w, spec));
}

OperatorExpansion sector_projector(const HighestWeight& w, int n, int k) {
  check_k(k);
  check_weight(w, n, k);
  Chain ch(n, k);
  return projector_in(ch, w);
}

OperatorExpansion gt_projector(const HighestWeight& w, const GTPattern& p, int n, int k) {
  check_k(k);
  check_weight(w, n, k);
  check_pattern(w, p);
  Chain ch(n, k);
  return refine(ch, projector_in(ch, w), w, p, k - 1);
}

GTBasisElement transition_operator(const HighestWeight& w, const GTPattern& source,
                                   const GTPattern& target, int n, int k) {
  check_k(k);
  check_weight(w, n, k);
  check_pattern(w, source);
  check_pattern(w, target);
  Chain ch(n, k);
  OperatorExpansion pt = refine(ch, projector_in(ch, w), w, target, k - 1);
  return {w, source, target, transition_from(ch, w, source, target, pt)};
}

void check_gt_capacity(int n, int k, const GTBasisOptions& opt) {
  check_k(k);
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (k == 5 && n > opt.max_k5_n)
    throw CapacityError("k = 5 basis is gated to n <= " + std::to_string(opt.max_k5_n));
  if (2 * n * (k - 1) > opt.max_support_bits)
    throw CapacityError("commutant support 2^" + std::to_string(2 * n * (k - 1)) +
                        " strings exceeds the basis capacity gate");
}

std::vector<GTBasisElement> gt_basis(int n, int k, GTBasisOptions opt) {
  check_gt_capacity(n, k, opt);
  Chain ch(n, k);
  std::vector<GTBasisElement> out;
  for (const HighestWeight& w : enumerate_weights(n, k)) {
    auto patterns = gt_patterns(w);
    // projectors share their upper refinements
    std::map<GTPattern, OperatorExpansion> proj;
    std::function<void(const OperatorExpansion&, int, GTPattern&)> descend =
        [&](const OperatorExpansion& z, int level, GTPattern& cur) {
          if (level < 2) {
            proj.emplace(cur, z);
            return;
          }
          const Label& parent = level + 1 == k ? w.parts : cur.labels[k - 2 - level];
          auto cands = detail::branch(parent, level + 1);
          for (const Label& c : cands) {
            cur.labels.push_back(c);
            descend(project_level(ch, z, level, c, cands), level - 1, cur);
            cur.labels.pop_back();
          }
        };
    GTPattern root;
    descend(projector_in(ch, w), k - 1, root);
    for (const GTPattern& s : patterns)
      for (const GTPattern& t : patterns)
        out.push_back({w, s, t, transition_from(ch, w, s, t, proj.at(t))});
  }
  return out;
}

}  // namespace mgc
