#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dolbeault/domain.hpp"
#include "dolbeault/rational.hpp"
#include "dolbeault/weights.hpp"

namespace dolbeault {

using ScalarFn = std::function<cplx(std::span<const cplx>)>;

std::vector<cplx> sample_scalar(const ScalarFn& f, const ProductGrid& g);

// prod_j |z_j|^{-s_j} weighted L^p norm of a node field.  Cell masses
// integrate the weight exactly in the radial direction on polar cells (the
// node value of |f| is frozen per cell), so the innermost cells are handled
// without ever evaluating the weight at 0; rectangle cells use the midpoint
// weight.  p = infinity is the weighted sup over nodes.  Cells whose exact
// weight mass is infinite contribute +infinity unless the field vanishes
// there.
double weighted_lp_norm(std::span<const cplx> f, const ProductGrid& g,
                        const pexp& p, std::span<const rat> s);

// Norm sweep under refinement (linear dimensions scaled by `step` per level,
// the sampler re-evaluated on each grid) with a divergence verdict.  The
// verdict is a documented heuristic: it fires on three consecutive
// relative-growth steps above 25%, or, for finite p, on three consecutive
// p-th-power increments that fail to decay (ratio >= 0.99 with at least 1%
// total growth) -- the signature of a logarithmically divergent integral,
// whose increments stay constant while convergent tails decay geometrically.
struct NormProbe {
    std::vector<double> value;  // base grid first
    bool diverging = false;
};

NormProbe norm_probe(const ScalarFn& f, const ProductGrid& base, const pexp& p,
                     std::span<const rat> s, int levels = 5, double step = 2.0);

// Empirical boundedness table for the weighted area transform on one factor:
// ratio ||I_k f||_{target} / ||f||_{source} over a named family.
//   modified = false: k = dbar_weight(p, s),          target s+ = s + 1 - eps
//   modified = true:  k = modified_dbar_weight(p, s), target s+ = s
// Members with vanishing source norm are skipped (0/0 guard); max_ratio is a
// sample max over the family, not an operator-norm claim.
struct RatioRow {
    std::string name;
    double source = 0, target = 0, ratio = 0;
    bool skipped = false, divergent = false;
};
struct RatioTable {
    std::vector<RatioRow> row;
    double max_ratio = 0;
    bool any_divergent = false;
    int k = 0;
    rat s_target{0};
};

RatioTable operator_norm_sample(const FactorGrid& g,
                                const std::vector<std::pair<std::string, ScalarFn>>& family,
                                const pexp& p, const rat& s, const rat& eps,
                                bool modified);

// Seeded bump-and-monomial family on one factor (deterministic under seed).
std::vector<std::pair<std::string, ScalarFn>> sample_family(const FactorGrid& g,
                                                            int bumps,
                                                            unsigned long long seed);

// Membership/divergence claims behind the integer weights, checked by
// refinement sweeps on the unit disc:
//   - the power (or, in the boundary case, log-modified) witness lies in
//     |z|^s L^p and in |z|^k L^1 but outside |z|^{k+1} L^1   (k maximal)
//   - z^{k_mod - 1} lies outside |z|^s L^p, z^{k_mod} inside (k_mod minimal)
struct WitnessLine {
    std::string claim;
    bool expect_diverging = false;
    bool observed_diverging = false;
    std::vector<double> sweep;
    bool match() const { return expect_diverging == observed_diverging; }
};
struct WitnessReport {
    pexp p;
    rat s{0};
    int k = 0, k_mod = 0;
    bool boundary_case = false;  // power witness cannot separate; log witness used
    std::vector<WitnessLine> line;
    bool all_match = true;
};

WitnessReport witness_report(const pexp& p, const rat& s, int base_res = 12);

// Canonical (p, s) pairs covering every split branch plus the boundary case.
std::vector<std::pair<pexp, rat>> witness_pairs();

} // namespace dolbeault
