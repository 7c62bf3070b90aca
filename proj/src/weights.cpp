#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "chain.hpp"
#include "mgc/bridge_gt.hpp"

namespace mgc {

namespace detail {

std::vector<Label> top_labels(int n, int level) {
  int r = level / 2;
  bool even = level % 2 == 0;
  std::vector<Label> out;
  Label cur(r);
  std::function<void(int, int)> rec = [&](int i, int upper) {
    if (i == r) {
      out.push_back(cur);
      return;
    }
    int lower = (even && i == r - 1) ? -upper : 0;
    for (int v = lower; v <= upper; ++v) {
      cur[i] = v;
      rec(i + 1, even && i == r - 1 ? 0 : v);
    }
  };
  rec(0, n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Label> branch(const Label& parent, int parent_level) {
  std::vector<Label> out;
  int r = static_cast<int>(parent.size());
  if (parent_level % 2 == 1) {
    // B_r -> D_r: l1 >= m1 >= l2 >= ... >= l_r >= |m_r|
    Label cur(r);
    std::function<void(int)> rec = [&](int i) {
      if (i == r) {
        out.push_back(cur);
        return;
      }
      int hi = parent[i];
      int lo = i + 1 < r ? parent[i + 1] : -parent[i];
      for (int v = lo; v <= hi; ++v) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  } else {
    // D_r -> B_{r-1}: m1 >= s1 >= m2 >= ... >= s_{r-1} >= |m_r|
    Label cur(r - 1);
    std::function<void(int)> rec = [&](int i) {
      if (i == r - 1) {
        out.push_back(cur);
        return;
      }
      int hi = parent[i];
      int lo = std::abs(parent[i + 1]);
      for (int v = lo; v <= hi; ++v) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool branches_to(const Label& child, const Label& parent, int parent_level) {
  auto b = branch(parent, parent_level);
  return std::binary_search(b.begin(), b.end(), child);
}

Rational quadratic_value(const Label& l, int level) {
  long long s = 0;
  for (std::size_t j = 0; j < l.size(); ++j)
    s += static_cast<long long>(l[j]) * (l[j] + level - 2 * static_cast<long long>(j + 1));
  return Rational(-s);
}

}  // namespace detail

std::string HighestWeight::str() const {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << ")";
  return os.str();
}

std::string GTPattern::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    os << (i ? ";" : "");
    for (std::size_t j = 0; j < labels[i].size(); ++j) os << (j ? "," : "") << labels[i][j];
  }
  os << "]";
  return os.str();
}

std::vector<HighestWeight> enumerate_weights(int n, int k) {
  if (k < 2) throw std::invalid_argument("weights need k >= 2");
  if (n < 1) throw std::invalid_argument("n must be positive");
  std::vector<HighestWeight> out;
  for (auto& l : detail::top_labels(n, k)) out.push_back({k, l});
  return out;
}

bool is_valid_weight(const HighestWeight& w, int n) {
  if (w.k < 2 || static_cast<int>(w.parts.size()) != w.k / 2) return false;
  auto all = detail::top_labels(n, w.k);
  return std::binary_search(all.begin(), all.end(), w.parts);
}

BigInt weyl_dim(const HighestWeight& w) {
  int k = w.k, r = k / 2;
  if (k < 2 || static_cast<int>(w.parts.size()) != r)
    throw std::invalid_argument("weight has the wrong number of parts");
  bool odd = k % 2 == 1;
  for (int i = 0; i < r; ++i) {
    if (i + 1 < r && w.parts[i] < std::abs(w.parts[i + 1]))
      throw std::invalid_argument("weight not dominant");
    if (odd && w.parts[i] < 0) throw std::invalid_argument("odd-k weights are nonnegative");
  }
  if (!odd && r == 1) return 1;  // so(2) irreps are one-dimensional
  // doubled coordinates: l = 2(nu + rho), rho_i = r - i (+1/2 if odd)
  std::vector<long long> l(r), rho(r);
  for (int i = 0; i < r; ++i) {
    rho[i] = 2 * (r - 1 - i) + (odd ? 1 : 0);
    l[i] = 2LL * w.parts[i] + rho[i];
  }
  BigRational d = 1;
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      d *= BigRational(l[i] * l[i] - l[j] * l[j], rho[i] * rho[i] - rho[j] * rho[j]);
  if (odd)
    for (int i = 0; i < r; ++i) d *= BigRational(l[i], rho[i]);
  if (boost::multiprecision::denominator(d) != 1)
    throw std::logic_error("non-integral Weyl dimension");
  return boost::multiprecision::numerator(d);
}

BigInt commutant_dim(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("n, k must be positive");
  BigRational d = 1;
  for (int i = 1; i <= k - 1; ++i)
    for (int j = i; j <= k - 1; ++j) d *= BigRational(2 * n + i + j - 1, i + j - 1);
  return boost::multiprecision::numerator(d);
}

BigInt commutant_dim_by_sectors(int n, int k) {
  if (k == 1) return 1;
  BigInt s = 0;
  for (auto& w : enumerate_weights(n, k)) {
    BigInt d = weyl_dim(w);
    s += d * d;
  }
  return s;
}

BigInt sector_multiplicity(const HighestWeight& w, int n) {
  int k = w.k, r = k / 2;
  bool odd = k % 2 == 1;
  // character of the Cartan torus: each generator B_{2j-1,2j} sees weights
  // nu in [-n, n] with multiplicity binom(2n, n + nu); an unpaired replica
  // contributes a factor 2^n
  auto chi = [&](const std::vector<long long>& doubled) -> BigInt {
    BigInt c = odd ? BigInt(1) << n : BigInt(1);
    for (long long e : doubled) {
      if (e % 2 != 0 || e < -2 * n || e > 2 * n) return 0;
      c *= binomial(2 * n, static_cast<int>((e + 2 * n) / 2));
    }
    return c;
  };
  std::vector<long long> rho(r);
  for (int i = 0; i < r; ++i) rho[i] = 2 * (r - 1 - i) + (odd ? 1 : 0);
  // multiplicity = sum_w sgn(w) chi_coeff(lambda + rho - w rho)
  std::vector<int> perm(r);
  for (int i = 0; i < r; ++i) perm[i] = i;
  BigInt m = 0;
  do {
    int inv = 0;
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j)
        if (perm[i] > perm[j]) ++inv;
    for (int flips = 0; flips < (1 << r); ++flips) {
      int nflip = __builtin_popcount(flips);
      if (!odd && nflip % 2) continue;
      int sgn = (inv + (odd ? nflip : 0)) % 2 ? -1 : 1;
      std::vector<long long> e(r);
      for (int i = 0; i < r; ++i) {
        long long wr = rho[perm[i]] * ((flips >> i & 1) ? -1 : 1);
        e[i] = 2LL * w.parts[i] + rho[i] - wr;
      }
      BigInt c = chi(e);
      if (sgn > 0)
        m += c;
      else
        m -= c;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return m;
}

std::vector<GTPattern> gt_patterns(const HighestWeight& w) {
  std::vector<GTPattern> out;
  GTPattern cur;
  std::function<void(const detail::Label&, int)> rec = [&](const detail::Label& parent, int level) {
    if (level == 2) {
      out.push_back(cur);
      return;
    }
    for (auto& child : detail::branch(parent, level)) {
      cur.labels.push_back(child);
      rec(child, level - 1);
      cur.labels.pop_back();
    }
  };
  rec(w.parts, w.k);
  std::sort(out.begin(), out.end());
  return out;
}

BigInt gt_label_count(int n, int k) {
  BigInt s = 0;
  for (auto& w : enumerate_weights(n, k)) {
    BigInt c = gt_patterns(w).size();
    s += c * c;
  }
  return s;
}

}  // namespace mgc
