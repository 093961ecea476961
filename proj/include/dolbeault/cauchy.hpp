#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dolbeault/domain.hpp"

namespace dolbeault {

// Orientation and measure conventions used throughout:
//   I_k f(z) = z^k/(2 pi i) * Int_D f(zeta) zeta^{-k} (zeta - z)^{-1} dzeta ^ dzetabar
// with dzeta ^ dzetabar = -2i dA, so I_0(1) on the unit disc equals conj(z)
// and d/dzbar inverts the k = 0 transform.

inline constexpr double kDefaultNearRadius = 2.0;  // near-field switch, in local cell sizes
inline constexpr std::size_t kKernelCacheBytes = 256u << 20;

// Exact Int_cell dA / (zeta - z), valid for z inside or outside the cell
// (z on the cell boundary is the caller's responsibility to avoid).
cplx cell_kernel_integral(const FactorGrid& g, int cell, cplx z);

// Exact Int_cell conj(zeta - z) / (zeta - z) dA, same validity.  Over a full
// origin-centered disc of any radius it sums to (pi/2) conj(z)^2.
cplx cell_conj_ratio_integral(const FactorGrid& g, int cell, cplx z);

// Exact Int_cell zeta^{-j} dA, j >= 1, for cells of an origin-centered polar
// grid.  Throws when the integral diverges (innermost cell, j >= 2).
cplx cell_weight_integral(const FactorGrid& g, int cell, int j);

// Quadrature weight approximating Int_cell zeta^{-k} (zeta - z)^{-1} dA with
// the smooth factor frozen at the cell node.  Midpoint in the far field,
// exact kernel integrals within rho local cell sizes of z, and exact
// kernel-plus-weight integrals when z is near an innermost weighted cell.
cplx cell_cauchy_weight(const FactorGrid& g, int cell, int k, cplx z, double rho);

// Weighted area transform of node samples f at a single target z inside the
// domain.  Throws for targets outside and for weights whose kernel is not
// integrable on the grid (k >= 2 on a grid whose cells touch 0).
cplx cauchy_area_point(const FactorGrid& g, std::span<const cplx> f, int k, cplx z,
                       double rho = kDefaultNearRadius);

// Per-factor transform with all grid nodes as targets.  The quadrature
// weights depend only on (grid, k, rho), so they are precomputed as a dense
// matrix when the memory cap allows; past the cap the transform re-evaluates
// the same weights on the fly, so the base sums agree between the regimes.
//
// In the dense regime, node targets additionally get two quadrature
// corrections that point targets cannot have (both need the samples as a
// field, not one value at a time):
//   - constant subtraction: the sample at the target is transformed against
//     exact kernel integrals over every cell, so only f - f(z_t), which
//     vanishes where the kernel blows up, meets the midpoint weights;
//     constants are then transformed exactly;
//   - near-field gradients: within the near radius the frozen-sample rule is
//     upgraded with exact first-moment integrals paired with stencil
//     derivatives of the samples, which removes the dominant error, keeps the
//     error field smooth enough to differentiate, and makes the transform of
//     fields linear in zbar exact up to stencil error.
// Weighted innermost cells keep their frozen-sample exact-kernel rule.  The
// corrections cost one exact contour integral per (target, cell) pair, so
// grids past the dense cap skip them and run plain frozen-sample quadrature.
struct FactorKernel {
    const FactorGrid* g = nullptr;
    int k = 0;
    double rho = kDefaultNearRadius;
    bool dense = false;
    std::vector<cplx> W;     // dense: row t holds the weights for target node t
    std::vector<cplx> corr;  // per target node: exact-minus-midpoint kernel mass
    // Near-field first-moment weights, CSR over target nodes; all scalar
    // prefactors folded in.  Empty when the grid is too coarse to stencil.
    std::vector<std::size_t> near_ptr;
    std::vector<int> near_cell;
    std::vector<cplx> near_mz, near_mzb;

    void build(const FactorGrid& grid, int k_, double rho_ = kDefaultNearRadius,
               std::size_t byte_cap = kKernelCacheBytes);
    cplx eval(std::span<const cplx> f, cplx z) const;
    void apply_to_nodes(std::span<const cplx> f, std::span<cplx> out) const;
};

// Fiberwise transform along one product-grid axis: for every node, apply the
// factor transform along its axis fiber.  kern must be built on
// grid.factor[axis]; in/out have grid.total entries and must not alias.
void axis_area_apply(const ProductGrid& grid, int axis, const FactorKernel& kern,
                     std::span<const cplx> in, std::span<cplx> out);

// Boundary transform R_k g(z) = z^k/(2 pi i) * Int_bD g zeta^{-k} (zeta-z)^{-1} dzeta.
// near_boundary is set when z lies within two node spacings of the contour;
// values there are returned but not trustworthy.
struct BoundaryValue {
    cplx value;
    bool near_boundary = false;
};
BoundaryValue cauchy_boundary_point(const BoundaryCurve& c, std::span<const cplx> g, int k, cplx z);

// Fiberwise boundary transform along one axis.  Samples of the integrand on
// the contour are requested per fiber through `sample` (fiber_base is the
// flat index of the fiber's first node).
void axis_boundary_apply(const ProductGrid& grid, int axis, const BoundaryCurve& curve, int k,
                         const std::function<cplx(std::size_t fiber_base, int bnode)>& sample,
                         std::span<cplx> out);

// | f(z) - area term of dbar f - boundary term of f | at one interior point;
// zero for smooth f by the Cauchy-Pompeiu identity.
double pompeiu_residual(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& dbar_f,
                        const FactorGrid& g, const BoundaryCurve& curve, cplx z);

// Int over the disc |t| < R of |t|^{-alpha} |t - z|^{-beta} dA, computed on a
// geometrically graded polar grid with exact radial masses and local
// refinement around t = z.  Requires alpha < 2, beta < 2.
double radial_kernel_integral(double R, double alpha, double beta, cplx z, int n_r = 256,
                              int n_th = 256);

// Nodes at least margin_cells grid spacings away from every factor boundary.
std::vector<unsigned char> interior_mask(const ProductGrid& grid, double margin_cells);

} // namespace dolbeault
