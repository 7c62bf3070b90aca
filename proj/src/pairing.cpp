#include "mgc/pairing.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "accumulator.hpp"

namespace mgc {

namespace {

int inversions_parity(const std::vector<int>& seq) {
  int inv = 0;
  for (std::size_t a = 0; a < seq.size(); ++a)
    for (std::size_t b = a + 1; b < seq.size(); ++b) inv += seq[a] > seq[b];
  return inv & 1;
}

// modes of a mask in increasing order, 0-based
std::vector<int> mask_modes(std::uint64_t m) {
  std::vector<int> out;
  while (m) {
    out.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return out;
}

void validate_matching(const SlotMatching& m) {
  int k = static_cast<int>(m.mate.size());
  for (int j = 0; j < k; ++j)
    for (int s = 0; s < static_cast<int>(m.mate[j].size()); ++s) {
      auto [i, t] = m.mate[j][s];
      if (i < 0 || i >= k || i == j || t < 0 || t >= static_cast<int>(m.mate[i].size()))
        throw std::invalid_argument("matching joins a slot to an invalid partner");
      if (m.mate[i][t] != std::make_pair(j, s))
        throw std::invalid_argument("matching is not symmetric");
    }
}

struct Edge {
  int lo, hi;  // replicas, lo < hi
  int lo_slot, hi_slot;
};

// Sum of sorting signs over every way of giving each edge a mode, with the
// modes of one replica distinct. Edges between the same replica pair take
// their modes in increasing order (other orders repeat the same term).
// Returns false when no assignment exists.
bool build_pairing(const SlotMatching& m, int n, OperatorExpansion& out) {
  validate_matching(m);
  int k = static_cast<int>(m.mate.size());
  std::vector<Edge> edges;
  for (int j = 0; j < k; ++j)
    for (int s = 0; s < static_cast<int>(m.mate[j].size()); ++s) {
      auto [i, t] = m.mate[j][s];
      if (j < i) edges.push_back({j, i, s, t});
    }
  // group edges by replica pair, in order of the slot on the lower replica
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::vector<int>> pair_edges;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto key = std::make_pair(edges[e].lo, edges[e].hi);
    auto it = std::find(pairs.begin(), pairs.end(), key);
    if (it == pairs.end()) {
      pairs.push_back(key);
      pair_edges.push_back({e});
    } else {
      pair_edges[it - pairs.begin()].push_back(e);
    }
  }
  for (auto& pe : pair_edges)
    std::sort(pe.begin(), pe.end(),
              [&](int a, int b) { return edges[a].lo_slot < edges[b].lo_slot; });

  for (int j = 0; j < k; ++j)
    if (static_cast<int>(m.mate[j].size()) > 2 * n) return false;

  const std::uint64_t full = 2 * n == 64 ? ~0ULL : (1ULL << (2 * n)) - 1;
  std::vector<std::uint64_t> used(k, 0);
  std::vector<int> edge_mode(edges.size(), -1);
  OperatorExpansion shape(n, k);
  detail::Accumulator acc(2 * n * k);
  bool any = false;

  std::vector<std::vector<int>> seq(k);
  for (int j = 0; j < k; ++j) seq[j].resize(m.mate[j].size());

  auto leaf = [&]() {
    int parity = 0;
    for (int j = 0; j < k; ++j) {
      for (int s = 0; s < static_cast<int>(m.mate[j].size()); ++s) seq[j][s] = -1;
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      seq[edges[e].lo][edges[e].lo_slot] = edge_mode[e];
      seq[edges[e].hi][edges[e].hi_slot] = edge_mode[e];
    }
    for (int j = 0; j < k; ++j) parity ^= inversions_parity(seq[j]);
    acc.add(shape.pack(used), parity ? -1.0 : 1.0);
    any = true;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == pairs.size()) {
      leaf();
      return;
    }
    auto [a, b] = pairs[p];
    int need = static_cast<int>(pair_edges[p].size());
    std::uint64_t avail = full & ~(used[a] | used[b]);
    if (std::popcount(avail) < need) return;
    // submasks of avail with `need` bits
    for (std::uint64_t sub = avail;; sub = (sub - 1) & avail) {
      if (std::popcount(sub) == need) {
        auto modes = mask_modes(sub);
        for (int t = 0; t < need; ++t) edge_mode[pair_edges[p][t]] = modes[t];
        used[a] |= sub;
        used[b] |= sub;
        rec(p + 1);
        used[a] &= ~sub;
        used[b] &= ~sub;
      }
      if (sub == 0) break;
    }
  };
  rec(0);
  if (!any) return false;
  out = OperatorExpansion::from_terms(n, k, acc.take());
  double nrm = std::sqrt(out.coeff_norm2());
  if (nrm > 0) out *= 1.0 / nrm;
  return true;
}

}  // namespace

std::vector<int> PairingConfig::row_sums() const {
  std::vector<int> r(k(), 0);
  for (int i = 0; i < k(); ++i)
    for (int j = 0; j < k(); ++j) r[i] += x[i][j];
  return r;
}

std::vector<int> PairingConfig::upper() const {
  std::vector<int> u;
  for (int i = 0; i < k(); ++i)
    for (int j = i + 1; j < k(); ++j) u.push_back(x[i][j]);
  return u;
}

std::string PairingConfig::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (int i = 0; i < k(); ++i)
    for (int j = i + 1; j < k(); ++j)
      if (x[i][j]) {
        os << (first ? "" : ",") << "x" << i + 1 << j + 1 << "=" << x[i][j];
        first = false;
      }
  os << "}";
  return os.str();
}

PairingConfig config_from_upper(int k, const std::vector<int>& upper) {
  if (static_cast<int>(upper.size()) != k * (k - 1) / 2)
    throw std::invalid_argument("upper triangle has the wrong length");
  PairingConfig c{std::vector<std::vector<int>>(k, std::vector<int>(k, 0))};
  int p = 0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      if (upper[p] < 0) throw std::invalid_argument("negative pairing count");
      c.x[i][j] = c.x[j][i] = upper[p++];
    }
  return c;
}

SlotMatching canonical_matching(const PairingConfig& c) {
  int k = c.k();
  auto r = c.row_sums();
  SlotMatching m;
  m.mate.resize(k);
  for (int j = 0; j < k; ++j) m.mate[j].resize(r[j]);
  // first slot of each partner block
  std::vector<std::vector<int>> start(k, std::vector<int>(k, 0));
  for (int j = 0; j < k; ++j) {
    int pos = 0;
    for (int i = 0; i < k; ++i) {
      start[j][i] = pos;
      if (i != j) pos += c.x[j][i];
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int t = 0; t < c.x[i][j]; ++t) {
        int si = start[i][j] + t, sj = start[j][i] + t;
        m.mate[i][si] = {j, sj};
        m.mate[j][sj] = {i, si};
      }
  return m;
}

SlotMatching random_matching(const PairingConfig& c, std::mt19937_64& rng) {
  SlotMatching base = canonical_matching(c);
  int k = c.k();
  // relabel slots inside each replica by a random permutation
  std::vector<std::vector<int>> perm(k);
  for (int j = 0; j < k; ++j) {
    perm[j].resize(base.mate[j].size());
    std::iota(perm[j].begin(), perm[j].end(), 0);
    std::shuffle(perm[j].begin(), perm[j].end(), rng);
  }
  SlotMatching m;
  m.mate.resize(k);
  for (int j = 0; j < k; ++j) {
    m.mate[j].resize(base.mate[j].size());
    for (std::size_t s = 0; s < base.mate[j].size(); ++s) {
      auto [i, t] = base.mate[j][s];
      m.mate[j][perm[j][s]] = {i, perm[i][t]};
    }
  }
  return m;
}

PairingConfig matching_config(const SlotMatching& m) {
  validate_matching(m);
  int k = static_cast<int>(m.mate.size());
  PairingConfig c{std::vector<std::vector<int>>(k, std::vector<int>(k, 0))};
  for (int j = 0; j < k; ++j)
    for (auto [i, t] : m.mate[j]) c.x[j][i] += 1;
  return c;
}

std::vector<PairingConfig> admissible_configs(const std::vector<int>& r) {
  int k = static_cast<int>(r.size());
  for (int v : r)
    if (v < 0) throw std::invalid_argument("weights must be nonnegative");
  std::vector<PairingConfig> out;
  if (k < 2) {
    if (std::all_of(r.begin(), r.end(), [](int v) { return v == 0; }))
      out.push_back({std::vector<std::vector<int>>(k, std::vector<int>(k, 0))});
    return out;
  }
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) slots.push_back({i, j});
  std::vector<int> rem = r, upper(slots.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t p) {
    if (p == slots.size()) {
      if (std::all_of(rem.begin(), rem.end(), [](int v) { return v == 0; }))
        out.push_back(config_from_upper(k, upper));
      return;
    }
    auto [i, j] = slots[p];
    // once pair (i, k-1) is reached row i must be closed off
    int hi = std::min(rem[i], rem[j]);
    int lo = 0;
    if (j == k - 1) lo = rem[i];
    if (lo > hi) return;
    for (int v = hi; v >= lo; --v) {
      upper[p] = v;
      rem[i] -= v;
      rem[j] -= v;
      rec(p + 1);
      rem[i] += v;
      rem[j] += v;
    }
    upper[p] = 0;
  };
  rec(0);
  return out;
}

OperatorExpansion pairing_operator(const SlotMatching& m, int n) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  OperatorExpansion out;
  if (!build_pairing(m, n, out))
    throw std::invalid_argument("pairing configuration " + matching_config(m).str() +
                                " needs more than 2n distinct modes");
  return out;
}

OperatorExpansion pairing_operator(const PairingConfig& c, int n) {
  return pairing_operator(canonical_matching(c), n);
}

bool pairing_feasible(const PairingConfig& c, int n) {
  OperatorExpansion out;
  return build_pairing(canonical_matching(c), n, out);
}

Eigen::MatrixXcd gram_matrix(const std::vector<OperatorExpansion>& ops) {
  if (ops.empty()) throw std::invalid_argument("Gram matrix of an empty list");
  int m = static_cast<int>(ops.size());
  Eigen::MatrixXcd g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) {
      g(i, j) = hs_inner(ops[i], ops[j]);
      g(j, i) = std::conj(g(i, j));
    }
  return g;
}

int gram_rank(const Eigen::MatrixXcd& g, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double top = ev.size() ? ev.maxCoeff() : 0.0;
  if (top <= 0) return 0;
  int r = 0;
  for (int i = 0; i < ev.size(); ++i) r += ev(i) > tol * top;
  return r;
}

int span_rank(const std::vector<OperatorExpansion>& ops, double tol) {
  return gram_rank(gram_matrix(ops), tol);
}

std::vector<std::vector<int>> weight_tuples(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> r(k, 0);
  std::function<void(int, int)> rec = [&](int j, int total) {
    if (j == k) {
      if (total % 2 == 0) out.push_back(r);
      return;
    }
    for (int v = 0; v <= 2 * n; ++v) {
      r[j] = v;
      rec(j + 1, total + v);
    }
  };
  rec(0, 0);
  return out;
}

std::vector<std::pair<PairingConfig, OperatorExpansion>> sector_pairings(
    const std::vector<int>& r, int n) {
  std::vector<std::pair<PairingConfig, OperatorExpansion>> out;
  for (auto& c : admissible_configs(r)) {
    OperatorExpansion op;
    if (build_pairing(canonical_matching(c), n, op) && !op.empty()) out.push_back({c, std::move(op)});
  }
  return out;
}

std::vector<OperatorExpansion> pairing_spanning_set(int n, int k) {
  std::vector<OperatorExpansion> out;
  for (auto& r : weight_tuples(n, k))
    for (auto& [c, op] : sector_pairings(r, n)) out.push_back(std::move(op));
  return out;
}

PairingRank pairing_span_rank(int n, int k, double tol) {
  PairingRank res;
  for (auto& r : weight_tuples(n, k)) {
    auto ops = sector_pairings(r, n);
    if (ops.empty()) continue;
    std::vector<OperatorExpansion> v;
    for (auto& [c, op] : ops) v.push_back(std::move(op));
    res.operators += static_cast<long long>(v.size());
    res.sectors += 1;
    res.rank += span_rank(v, tol);
  }
  return res;
}

OperatorExpansion project_onto_span(const std::vector<OperatorExpansion>& ops,
                                    const OperatorExpansion& w, double tol) {
  Eigen::MatrixXcd g = gram_matrix(ops);
  Eigen::VectorXcd b(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) b(i) = hs_inner(ops[i], w);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  const auto& ev = es.eigenvalues();
  double top = ev.maxCoeff();
  Eigen::VectorXcd coef = Eigen::VectorXcd::Zero(ops.size());
  if (top > 0) {
    Eigen::VectorXcd y = es.eigenvectors().adjoint() * b;
    for (int i = 0; i < ev.size(); ++i) y(i) = ev(i) > tol * top ? y(i) / ev(i) : 0.0;
    coef = es.eigenvectors() * y;
  }
  OperatorExpansion out(w.n(), w.k());
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (std::abs(coef(i)) > 0) out += coef(i) * ops[i];
  return out;
}

}  // namespace mgc
