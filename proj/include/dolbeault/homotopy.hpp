#pragma once

#include <functional>
#include <span>

#include "dolbeault/cauchy.hpp"
#include "dolbeault/domain.hpp"
#include "dolbeault/forms.hpp"

namespace dolbeault {

// (0,q)-form with smooth closed-form coefficients, evaluable anywhere on the
// closed product.  dbar coefficients are supplied in closed form too, so the
// operator identities can be probed without differencing the input: `coef`
// is indexed by the q-subset mask, `dbar` by the (q+1)-subset mask of the
// derivative.  Both callables must be total on their mask range; `dbar` may
// be omitted only for top-degree forms.
struct SmoothForm {
    int n = 0;
    int q = 0;
    std::function<cplx(unsigned mask, std::span<const cplx> z)> coef;
    std::function<cplx(unsigned mask, std::span<const cplx> z)> dbar;
};

Form0q sample_form(const SmoothForm& w, const ProductGrid& g);
Form0q sample_dbar(const SmoothForm& w, const ProductGrid& g);

// Fiberwise area transform along `axis` with weight k: components carrying
// dzbar_axis lose it (with the reordering sign) and pass through the fiber
// transform; components without it are dropped.  Degree drops by one.
// `kern` must be built on grid.factor[axis] with the same weight.
Form0q axis_area_op(const Form0q& w, int axis, const FactorKernel& kern);

// Fiberwise boundary transform along `axis` with weight k: components free
// of dzbar_axis pass through the contour transform, the rest are dropped.
// Degree is preserved and the output is fiberwise holomorphic in z_axis.
// Coefficients are sampled on the contour through the callable, so no grid
// interpolation is involved.
Form0q axis_boundary_op(const SmoothForm& w, const ProductGrid& g, int axis,
                        const BoundaryCurve& curve, int k);

// Worst relative failure of discrete Cauchy reproduction of the boundary
// transform along its own axis, over a subsample of fibers: the output of
// axis_boundary_op is fiberwise holomorphic, so an inset contour must
// reproduce it at interior targets.
double axis_fiber_holomorphy_defect(const SmoothForm& w, const ProductGrid& g, int axis,
                                    int m_b = 0);

// Single-axis splitting identity omega = dbar I omega + I dbar omega + R omega,
// evaluated on interior nodes (margin away from every factor boundary, where
// the stencils and the near-boundary contour values are unreliable).
struct IdentityReport {
    double residual = 0;       // masked sup of the identity defect
    double scale = 0;          // masked sup of omega, for relative reading
    double r_sup = 0;          // sup of the boundary term over all nodes
    bool r_in_lower_class = false;  // boundary term confined below `axis`
};

IdentityReport axis_identity_residual(const SmoothForm& w, const ProductGrid& g, int axis,
                                      int m_b = 0);

// Composite solution and error operators, assembled axis by axis from the
// area and boundary transforms with the boundary factor applied on the last
// axis first.  Chains of two or more boundary terms would need derivatives
// of contour integrals at off-grid points, which a sampled representation
// cannot provide, so the composites are limited to one or two factors; that
// covers every identity this library verifies.
Form0q homotopy_area_chain(const SmoothForm& w, const ProductGrid& g, int m_b = 0);   // S omega
Form0q homotopy_error_chain(const SmoothForm& w, const ProductGrid& g, int m_b = 0);  // T dbar omega

struct HomotopyReport {
    double residual = 0;  // masked sup of omega - dbar(S omega) - T(dbar omega)
    double scale = 0;     // masked sup of omega
    // Defect of replacing dbar R omega by dbar omega - dbar I dbar omega on
    // the last axis (the identity behind the error-chain normal form);
    // meaningful for two factors in degree one, zero otherwise.
    double substitution_defect = 0;
};

HomotopyReport homotopy_residual(const SmoothForm& w, const ProductGrid& g, int m_b = 0);

} // namespace dolbeault
