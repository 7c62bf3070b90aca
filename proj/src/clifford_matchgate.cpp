#include "mgc/clifford_matchgate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "accumulator.hpp"

namespace mgc {

namespace {

void check_occupancy(const PatternOccupancy& o, int n) {
  if (o.k < 1) throw std::invalid_argument("k must be positive");
  if (o.counts.size() != even_patterns(o.k).size())
    throw std::invalid_argument("occupancy has the wrong number of patterns");
  for (int c : o.counts)
    if (c < 0) throw std::invalid_argument("negative occupation number");
  if (o.total() != 2 * n) throw std::invalid_argument("occupation numbers must sum to 2n");
}

// Pattern of every mode of a replicated string: bit j of the pattern is set
// when the mode appears in replica j.
struct Classified {
  bool even = false;
  std::vector<int> counts;  // per pattern index
  int sign = 1;             // relative to the reference assignment
};

class Classifier {
 public:
  Classifier(int n, int k) : n_(n), k_(k), patterns_(even_patterns(k)), index_(1u << k, -1) {
    for (std::size_t c = 0; c < patterns_.size(); ++c) index_[patterns_[c]] = static_cast<int>(c);
  }

  const std::vector<std::uint32_t>& patterns() const { return patterns_; }

  Classified operator()(const std::vector<std::uint64_t>& masks) const {
    Classified out;
    out.counts.assign(patterns_.size(), 0);
    std::vector<std::vector<int>> members(patterns_.size());
    for (int mu = 0; mu < 2 * n_; ++mu) {
      std::uint32_t pat = 0;
      for (int j = 0; j < k_; ++j)
        if (masks[j] >> mu & 1) pat |= 1u << j;
      int c = index_[pat];
      if (c < 0) return out;
      out.counts[c] += 1;
      members[c].push_back(mu);
    }
    out.even = true;
    int parity = 0;
    std::vector<int> seq;
    for (int j = 0; j < k_; ++j) {
      seq.clear();
      for (std::size_t c = 0; c < patterns_.size(); ++c)
        if (patterns_[c] >> j & 1) seq.insert(seq.end(), members[c].begin(), members[c].end());
      for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b) parity ^= seq[a] > seq[b];
    }
    out.sign = parity ? -1 : 1;
    return out;
  }

 private:
  int n_, k_;
  std::vector<std::uint32_t> patterns_;
  std::vector<int> index_;
};

}  // namespace

int PatternOccupancy::total() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::vector<std::pair<std::vector<int>, int>> PatternOccupancy::entries() const {
  auto pats = even_patterns(k);
  std::vector<std::pair<std::vector<int>, int>> out;
  for (std::size_t c = 0; c < pats.size() && c < counts.size(); ++c)
    out.push_back({pattern_replicas(pats[c]), counts[c]});
  return out;
}

std::string PatternOccupancy::str() const {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto& [rep, x] : entries()) {
    if (!x) continue;
    os << (first ? "" : ",") << "x[";
    for (std::size_t i = 0; i < rep.size(); ++i) os << (i ? "," : "") << rep[i];
    os << "]=" << x;
    first = false;
  }
  os << "}";
  return os.str();
}

std::vector<std::uint32_t> even_patterns(int k) {
  if (k < 1 || k > 20) throw std::invalid_argument("k out of range for pattern enumeration");
  std::vector<std::uint32_t> out;
  for (std::uint32_t p = 0; p < (1u << k); ++p)
    if (std::popcount(p) % 2 == 0) out.push_back(p);
  return out;
}

std::vector<int> pattern_replicas(std::uint32_t pattern) {
  std::vector<int> out;
  for (int j = 0; j < 32; ++j)
    if (pattern >> j & 1) out.push_back(j + 1);
  return out;
}

PatternOccupancy occupancy_from_entries(int k,
                                        const std::vector<std::pair<std::vector<int>, int>>& entries) {
  auto pats = even_patterns(k);
  PatternOccupancy o{k, std::vector<int>(pats.size(), 0)};
  for (auto& [rep, x] : entries) {
    std::uint32_t p = 0;
    for (int j : rep) {
      if (j < 1 || j > k) throw std::invalid_argument("pattern replica out of range");
      if (p >> (j - 1) & 1) throw std::invalid_argument("repeated replica in pattern");
      p |= 1u << (j - 1);
    }
    auto it = std::find(pats.begin(), pats.end(), p);
    if (it == pats.end()) throw std::invalid_argument("pattern must have even size");
    o.counts[it - pats.begin()] += x;
  }
  return o;
}

std::vector<PatternOccupancy> enumerate_occupancies(int n, int k, bool even_only) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  int parts = static_cast<int>(even_patterns(k).size());
  std::vector<PatternOccupancy> out;
  std::vector<int> counts(parts, 0);
  int step = even_only ? 2 : 1;
  std::function<void(int, int)> rec = [&](int c, int left) {
    if (c == parts - 1) {
      if (left % step) return;
      counts[c] = left;
      out.push_back({k, counts});
      return;
    }
    for (int v = 0; v <= left; v += step) {
      counts[c] = v;
      rec(c + 1, left - v);
    }
    counts[c] = 0;
  };
  rec(0, 2 * n);
  return out;
}

BigInt pattern_multiplicity(const PatternOccupancy& o) { return multinomial(o.counts); }

OperatorExpansion pattern_operator(const PatternOccupancy& o, int n, bool normalized) {
  check_occupancy(o, n);
  int k = o.k;
  Classifier cls(n, k);
  const auto& pats = cls.patterns();
  OperatorExpansion shape(n, k);
  detail::Accumulator acc(2 * n * k);
  std::vector<int> left = o.counts;
  std::vector<std::uint64_t> masks(k, 0);
  std::function<void(int)> rec = [&](int mu) {
    if (mu == 2 * n) {
      auto c = cls(masks);
      acc.add(shape.pack(masks), static_cast<double>(c.sign));
      return;
    }
    for (std::size_t c = 0; c < pats.size(); ++c) {
      if (!left[c]) continue;
      --left[c];
      for (int j = 0; j < k; ++j)
        if (pats[c] >> j & 1) masks[j] |= 1ULL << mu;
      rec(mu + 1);
      for (int j = 0; j < k; ++j) masks[j] &= ~(1ULL << mu);
      ++left[c];
    }
  };
  rec(0);
  auto out = OperatorExpansion::from_terms(n, k, acc.take());
  if (normalized) out *= 1.0 / std::sqrt(out.coeff_norm2() * std::pow(2.0, n * k));
  return out;
}

BigInt cm_dim(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("n and k must be positive");
  if (k > 40) throw std::invalid_argument("k too large");
  BigInt parts = BigInt(1) << (k - 1);
  // binom(2n + P - 1, P - 1) = binom(2n + P - 1, 2n)
  BigInt num = 1, den = 1;
  for (int i = 1; i <= 2 * n; ++i) {
    num *= parts - 1 + i;
    den *= i;
  }
  return num / den;
}

OperatorExpansion cm_twirl(const OperatorExpansion& w) {
  int n = w.n(), k = w.k();
  if (n < 1 || k < 1) throw DimensionError("operator has no shape");
  Classifier cls(n, k);
  std::map<std::vector<int>, cplx> overlap;  // sum of sign * coefficient
  for (const Term& t : w.terms()) {
    auto c = cls(w.unpack(t.key));
    if (!c.even) continue;
    overlap[c.counts] += static_cast<double>(c.sign) * t.c;
  }
  OperatorExpansion out(n, k);
  for (auto& [counts, s] : overlap) {
    if (std::abs(s) < kPruneTol) continue;
    PatternOccupancy o{k, counts};
    out += (s / to_double(pattern_multiplicity(o))) * pattern_operator(o, n);
  }
  return out;
}

std::vector<SignedPermutation> all_signed_permutations(int n) {
  int m = 2 * n;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<SignedPermutation> out;
  do {
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
      SignedPermutation sp{perm, std::vector<int>(m, 1)};
      for (int b = 0; b < m; ++b)
        if (s >> b & 1) sp.signs[b] = -1;
      out.push_back(std::move(sp));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

OperatorExpansion cm_twirl_exhaustive(const OperatorExpansion& w) {
  if (w.n() > 2) throw CapacityError("exhaustive Clifford-matchgate average is gated to n <= 2");
  auto group = all_signed_permutations(w.n());
  OperatorExpansion sum(w.n(), w.k());
  for (const auto& g : group) sum += apply_signed_permutation(w, g);
  sum *= 1.0 / static_cast<double>(group.size());
  return sum;
}

OperatorExpansion cm_vacuum_moment(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("n and k must be positive");
  if (n * k > 12) throw CapacityError("vacuum moment expansion is gated to nk <= 12");
  OperatorExpansion out(n, k);
  double scale = std::pow(2.0, -n * k);
  for (auto& o : enumerate_occupancies(n, k, true)) {
    std::vector<int> half;
    for (int c : o.counts) half.push_back(c / 2);
    double coef = scale * to_double(multinomial(half)) / to_double(pattern_multiplicity(o));
    out += coef * pattern_operator(o, n);
  }
  return out;
}

}  // namespace mgc
