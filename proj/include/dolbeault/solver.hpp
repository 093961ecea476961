#pragma once

#include <span>
#include <vector>

#include "dolbeault/cauchy.hpp"
#include "dolbeault/domain.hpp"
#include "dolbeault/forms.hpp"
#include "dolbeault/homotopy.hpp"
#include "dolbeault/rational.hpp"
#include "dolbeault/weights.hpp"

namespace dolbeault {

// Smooth cutoff on one factor: identically 1 on the plateau region,
// identically 0 outside the support region, the exp(-1/t) smoothstep in
// between.  Discs transition radially, rectangles per edge.  dbar is closed
// form with exact zeros off the open transition band, so the wedge terms of
// the induction never see differencing error.
struct AxisCutoff {
    PlanarDomain plateau;
    PlanarDomain support;
    std::vector<double> chi;  // node samples on the factor grid
    std::vector<cplx> dchi;   // d chi / d zbar node samples
    double band_mass = 0;     // grid integral of |dchi|, refinement-stable

    double value(cplx z) const;
    cplx dbar(cplx z) const;
};

struct CutoffFamily {
    std::vector<AxisCutoff> axis;
};

// One cutoff per factor: plateau covers `inner` widened by plateau_margin,
// support ends support_margin inside the factor domain.  Margins are
// absolute lengths; an empty transition band throws.
CutoffFamily make_cutoffs(const ProductGrid& grid, const std::vector<PlanarDomain>& inner,
                          double plateau_margin, double support_margin);

// Nodes whose every coordinate lies inside the per-axis region.
std::vector<unsigned char> product_region_mask(const ProductGrid& grid,
                                               const std::vector<PlanarDomain>& region);

// Largest masked stencil-vs-exact derivative error the grid reports on a
// smooth calibration field, per axis maximum.  Preconditions expressed as
// "closed to grid accuracy" compare against a multiple of this.
double grid_differentiation_error(const ProductGrid& grid);

// Splitting identity for forms compactly supported along `axis`:
//   omega = dbar_m I_{m_axis} omega + I_{m_axis} dbar_m omega,
// measured as a masked sup.  The identity needs the support to die out
// before the factor boundary (the boundary transform is what is being
// dropped); calling this with full-support data is how the negative control
// quantifies that loss, so no support precondition is enforced here.
struct SupportIdentityReport {
    double residual = 0;
    double scale = 0;  // masked sup of omega
};

SupportIdentityReport support_identity_residual(const SmoothForm& w, const ProductGrid& grid,
                                                int axis, std::span<const int> m);

enum class WeightMode { full, modified };

struct SolveConfig {
    pexp p = pexp::finite(rat(2));
    std::vector<rat> s;  // one entry per axis
    WeightMode mode = WeightMode::full;
    rat eps{1, 10};  // weight gain headroom, full mode only
    double plateau_margin = 0.05;
    double support_margin = 0.05;
};

// One step of the induction, kept for verification: the stage that
// transforms along `axis` consumes omega/dbar_omega and emits eta/theta and
// the next omega/dbar_omega.  dbar_omega is carried by the recursion
//   dbar omega' = dbar_chi ^ omega - I(dbar_chi ^ dbar_omega)
// rather than by differencing, so its support bookkeeping is exact.
struct SolveStage {
    int axis = 0;
    Form0q omega;       // entering the stage
    Form0q dbar_omega;  // entering the stage (recursion field)
    Form0q eta;
    Form0q theta;
};

struct SolveTrace {
    std::vector<int> c;       // per-axis transform weights actually used
    std::vector<rat> s_plus;  // target weight vector
    CutoffFamily cutoffs;
    std::vector<SolveStage> stage;  // axis n-1 first
};

struct SolveResult {
    Form0q eta;
    SolveTrace trace;
};

// Weighted-dbar solution operator on the inner product domain: eta with
// dbar_c eta = omega on the inner region, degree q -> q-1, linear in omega.
// mode full uses c = dbar_weight(p, s) and targets s + (0,...,0,1-eps);
// mode modified uses c = modified_dbar_weight(p, s) and targets s itself.
// omega must be dbar_c-closed on the grid (checked against a multiple of
// grid_differentiation_error; violations throw std::invalid_argument).
// Component patterns of the intermediates are asserted (std::logic_error).
SolveResult solve_dbar(const Form0q& omega, const std::vector<PlanarDomain>& inner,
                       const SolveConfig& cfg);

// Weighted norm of a form: componentwise weighted_lp_norm, max over
// components.  Infinite masses propagate as +inf.
double form_weighted_norm(const Form0q& w, const pexp& p, std::span<const rat> s);

// Post-hoc verification of a solve: the defect of dbar_c eta = omega on the
// inner region, norm ratio, the two weighted-derivative evaluation paths,
// and the trace bookkeeping (support confinement and the recursion law).
struct SolveReport {
    double residual_inner = 0;  // sup |dbar_c eta - omega| on inner-region nodes
    double scale = 0;           // sup |omega| on the same mask
    double eta_norm = 0;        // s_plus-weighted norm of eta over the grid
    double omega_norm = 0;      // s-weighted norm of omega
    double ratio = 0;           // eta_norm / omega_norm, 0 when omega_norm is 0
    double mode_agreement = 0;  // sup |dbar_c eta - dbar_ktilde eta| off the divisor
    double chain_law = 0;       // worst stage: differenced dbar omega^j vs recursion field
    double theta_inner = 0;     // worst stage: sup |theta^j| on the inner region
    double support_leak = 0;    // worst stage: |dbar omega^j| mass outside its band union
    bool class_ok = true;       // component patterns of all intermediates
};

SolveReport verify_solution(const SolveResult& r, const Form0q& omega,
                            const std::vector<PlanarDomain>& inner, const SolveConfig& cfg);

} // namespace dolbeault
