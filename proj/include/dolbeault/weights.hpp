#pragma once

#include <utility>
#include <vector>

#include "dolbeault/rational.hpp"

namespace dolbeault {

// Integer weights attached to a Lebesgue exponent p and a growth order s.
//
// dbar_weight(p, s) is the largest m such that multiplication by z^{-m} maps
// |z|^s L^p into locally integrable functions:
//   p = 1:      max{ m : m <= 2 + s - 2/p }
//   otherwise:  max{ m : m <  2 + s - 2/p }   (2/p = 0 when p = inf)
//
// modified_dbar_weight(p, s) is the least k with z^k O(D) inside |z|^s L^p:
//   p finite:   min{ k : (s - k) p < 2 }
//   p = inf:    min{ k : s - k <= 0 }
//
// weight_gap = dbar_weight - modified_dbar_weight lies in {0, 1}; it vanishes
// exactly when p is finite, p != 1, and (s - [s]) p is 2 or 2 - p.
int dbar_weight(const pexp& p, rat s);
int modified_dbar_weight(const pexp& p, rat s);
int weight_gap(const pexp& p, rat s);

// dbar_weight split as k0 + k1 with k0 = [s] and k1 in {0, 1, 2}.
std::pair<int, int> dbar_weight_split(const pexp& p, rat s);

// Exact predicate for weight_gap == 0 (see above).  Exposed so that the gap
// law can be property-tested independently of the subtraction.
bool weight_gap_vanishes(const pexp& p, rat s);

// Componentwise variants for product domains; reject empty weight vectors.
std::vector<int> dbar_weight(const pexp& p, const std::vector<rat>& s);
std::vector<int> modified_dbar_weight(const pexp& p, const std::vector<rat>& s);
std::vector<int> weight_gap(const pexp& p, const std::vector<rat>& s);

} // namespace dolbeault
