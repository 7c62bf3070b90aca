#pragma once

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "mgc/majorana.hpp"

namespace mgc::detail {

// Scatter-add of (key, coefficient) pairs. Small key spaces use a dense
// thread-local table plus a touched list, larger ones a hash map.
class Accumulator {
 public:
  explicit Accumulator(int bits) : bits_(bits), level_(depth()++) {
    if (bits_ <= kDenseBits) {
      auto& tab = table();
      auto& flags = seen();
      std::size_t need = std::size_t{1} << bits_;
      if (tab.size() < need) {
        tab.assign(need, cplx{});
        flags.assign(need, 0);
      }
      touched_.reserve(256);
    }
  }

  void add(Key key, cplx c) {
    if (bits_ <= kDenseBits) {
      auto& flags = seen();
      if (!flags[key]) {
        flags[key] = 1;
        touched_.push_back(key);
      }
      table()[key] += c;
    } else {
      map_[key] += c;
    }
  }

  std::vector<Term> take(double prune = kPruneTol) {
    std::vector<Term> out;
    if (bits_ <= kDenseBits) {
      auto& tab = table();
      auto& flags = seen();
      std::sort(touched_.begin(), touched_.end());
      out.reserve(touched_.size());
      for (Key key : touched_) {
        if (std::abs(tab[key]) >= prune) out.push_back({key, tab[key]});
        tab[key] = cplx{};
        flags[key] = 0;
      }
      touched_.clear();
    } else {
      out.reserve(map_.size());
      for (auto& [key, c] : map_)
        if (std::abs(c) >= prune) out.push_back({key, c});
      map_.clear();
      std::sort(out.begin(), out.end(),
                [](const Term& a, const Term& b) { return a.key < b.key; });
    }
    return out;
  }

  ~Accumulator() {
    --depth();
    // leave the shared table clean if take() was never called
    if (bits_ <= kDenseBits && !touched_.empty()) {
      auto& tab = table();
      auto& flags = seen();
      for (Key key : touched_) {
        tab[key] = cplx{};
        flags[key] = 0;
      }
    }
  }

  Accumulator(const Accumulator&) = delete;
  Accumulator& operator=(const Accumulator&) = delete;

 private:
  static constexpr int kDenseBits = 22;
  // one scratch table per nesting level so accumulators may nest
  static int& depth() {
    thread_local int d = 0;
    return d;
  }
  std::vector<cplx>& table() {
    thread_local std::vector<std::vector<cplx>> t;
    if (t.size() <= static_cast<std::size_t>(level_)) t.resize(level_ + 1);
    return t[level_];
  }
  std::vector<unsigned char>& seen() {
    thread_local std::vector<std::vector<unsigned char>> s;
    if (s.size() <= static_cast<std::size_t>(level_)) s.resize(level_ + 1);
    return s[level_];
  }

  int bits_;
  int level_;
  std::vector<Key> touched_;
  std::unordered_map<Key, cplx> map_;
};

}  // namespace mgc::detail
