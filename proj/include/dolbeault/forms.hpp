#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dolbeault/domain.hpp"
#include "dolbeault/rational.hpp"
#include "dolbeault/weights.hpp"

namespace dolbeault {

// Anti-holomorphic multi-indices are bitmasks over axes 0..n-1 (bit j set
// means the component carries dzbar_j).  The canonical component order is
// increasing mask value, which for a fixed degree is lexicographic on the
// sorted axis tuples.
std::vector<unsigned> increasing_subsets(int n, int q);

// Sign of moving dzbar_axis past the axes of `mask` that precede it:
// dzbar_axis ^ dzbar_mask = insertion_sign * dzbar_{mask | bit(axis)}.
int insertion_sign(unsigned mask, int axis);

// A (0,q)-form sampled at the nodes of a product grid, one coefficient field
// per canonical multi-index.  coef[c][flat] pairs with mask[c].
struct Form0q {
    const ProductGrid* grid = nullptr;
    int n = 0;
    int q = 0;  // may be n+1 transiently (dbar of a top form; no components)
    std::vector<unsigned> mask;
    std::vector<std::vector<cplx>> coef;

    static Form0q zero(const ProductGrid& g, int degree);

    int find(unsigned m) const;  // component slot, -1 if absent
    std::vector<cplx>& operator[](unsigned m);
    const std::vector<cplx>& operator[](unsigned m) const;
};

Form0q scaled_form(cplx a, const Form0q& x);
Form0q axpy_form(cplx a, const Form0q& x, const Form0q& y);  // a*x + y
double sup_norm(const Form0q& w);
// Sup over nodes where keep[flat] != 0 only.
double sup_norm_masked(const Form0q& w, std::span<const unsigned char> keep);

// Split along one axis: { components carrying dzbar_axis, the rest }.
// Reassembling via wedge and addition is exact; tests rely on that.
std::pair<Form0q, Form0q> split_axis(const Form0q& w, int axis);

// True when every nonvanishing component (sup over nodes > tol) uses only
// the first `upto` axes.  With dbar given, the same is required of it.
bool gamma_class(const Form0q& w, const Form0q* dbar, int upto, double tol = 0.0);

// dbar of a scalar node field along one factor, all other axes frozen.
// Fourth-order stencils: centered in the interior, one-sided at outer rows,
// periodic in the polar angle; the polar radial line continues through the
// origin to the antipodal cell column, so no special casing at r = 0.
// Throws std::invalid_argument("grid too coarse...") below 5 rows/columns.
void axis_dbar_field(const ProductGrid& g, int axis, std::span<const cplx> in,
                     std::span<cplx> out);

// Same stencil on a single factor fiber; in/out hold the factor's nodes at
// the given stride.  Same coarseness limit as axis_dbar_field.
void fiber_dbar(const FactorGrid& f, const cplx* in, cplx* out, std::size_t stride = 1);

// Componentwise exterior dbar on the grid: degree q -> q+1.
Form0q dbar_numeric(const Form0q& w);

// Weighted dbar: z^k dbar (z^-k w), diagonal weight k[j] on axis j.
// k identically zero reproduces dbar_numeric bit for bit.
Form0q dbar_weighted(const Form0q& w, std::span<const int> k);

// (g dzbar_axis) ^ w for a scalar node field g; components already carrying
// dzbar_axis drop out.
Form0q wedge_dbar_axis(int axis, std::span<const cplx> g, const Form0q& w);

// Node field of z^k (and z^-k) over the product grid for a diagonal
// multi-weight; shared by dbar_weighted and the transforms' callers.
std::vector<cplx> monomial_field(const ProductGrid& g, std::span<const int> k);

// Membership of a scalar function in the weighted dbar-kernel on the grid's
// product domain: f must be dbar_k-closed (precondition; violations throw),
// z^-k f must be reproduced by the per-axis boundary transform (discrete
// holomorphy), and the weighted norm must stay finite and stable under one
// grid refinement.
struct MembershipReport {
    bool member = false;
    double dbar_residual = 0;  // weighted-dbar sup away from the boundary
    double holo_defect = 0;    // worst relative boundary-reproduction error
    double norm_coarse = 0;
    double norm_fine = 0;
    bool norm_stable = false;
};

MembershipReport kernel_membership_q0(
    const std::function<cplx(std::span<const cplx>)>& f, const ProductGrid& g,
    const pexp& p, std::span<const rat> s);

} // namespace dolbeault
