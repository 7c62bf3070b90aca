#pragma once

#include <vector>

#include "mgc/combinatorics.hpp"

// Label bookkeeping for the chain so(k) > so(k-1) > ... > so(2).
namespace mgc::detail {

using Label = std::vector<int>;

// all highest weights of so(level) occurring with at most n modes
std::vector<Label> top_labels(int n, int level);
// labels of so(parent_level - 1) inside the parent irrep
std::vector<Label> branch(const Label& parent, int parent_level);
bool branches_to(const Label& child, const Label& parent, int parent_level);

// -sum_j l_j (l_j + level - 2j)
Rational quadratic_value(const Label& l, int level);

}  // namespace mgc::detail
