#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dolbeault {

using cplx = std::complex<double>;

// Planar factor of a product domain: a disc or an axis-aligned rectangle.
struct PlanarDomain {
    enum class Shape { disc, rectangle };
    Shape shape = Shape::disc;
    cplx center{0.0, 0.0};
    double radius = 1.0;
    cplx lo{0.0, 0.0}, hi{1.0, 1.0};

    static PlanarDomain disc(cplx center, double radius);
    static PlanarDomain rectangle(cplx lo, cplx hi);

    bool contains(cplx z) const;           // open interior
    double boundary_distance(cplx z) const;
    double diameter() const;
    double area() const;
    // Scaled copy about the domain center; used for inset test contours.
    PlanarDomain scaled(double factor) const;
};

// Cell-centered quadrature grid on one factor.  Polar cells on discs (radial
// index major), uniform cartesian cells on rectangles (row index major).
// Nodes sit at cell centers, so an origin-centered disc never places a node
// on z = 0.
struct FactorGrid {
    PlanarDomain dom;
    bool polar = true;
    int n1 = 0;  // polar: n_r,  rect: n_rows (y)
    int n2 = 0;  // polar: n_th, rect: n_cols (x)

    std::vector<cplx> node;
    std::vector<double> area;
    std::vector<double> hloc;  // local cell size, near-field predicate scale
    // Cell bounds: polar (r0, r1, th0, th1), rect (x0, x1, y0, y1).
    std::vector<double> g0, g1, g2, g3;

    std::size_t size() const { return node.size(); }
    int cell_of(cplx z) const;             // -1 when z lies outside
    bool innermost(int cell) const;        // polar cell touching r = 0
    double spacing() const;                // representative node spacing
};

// disc: (a, b) = (n_r, n_theta), n_theta even;  rectangle: (a, b) = (nx, ny).
FactorGrid make_grid(const PlanarDomain& dom, int a, int b);

// Product grid; factor-major flat indexing (first factor varies slowest).
struct ProductGrid {
    std::vector<FactorGrid> factor;
    std::vector<std::size_t> stride;
    std::size_t total = 0;

    int n() const { return static_cast<int>(factor.size()); }
    std::size_t index(std::span<const int> per_factor) const;
    void decompose(std::size_t flat, std::span<int> per_factor) const;
    cplx coord(std::size_t flat, int axis) const;
};

ProductGrid make_product(std::vector<FactorGrid> factors);

// Same domain, linear dimensions scaled by `factor` (rounded, minimums kept,
// n_theta kept even).  factor > 1 refines, factor < 1 coarsens.
FactorGrid refine_grid(const FactorGrid& g, double factor);
ProductGrid refine_product(const ProductGrid& g, double factor);

// Closed boundary contour with nodes, exact tangents and parameter weights:
// a contour integral of g is sum(g(node[i]) * tangent[i] * weight[i]).
// Circles carry equispaced nodes starting at parameter 0 (periodic trapezoid);
// rectangle edges carry midpoint nodes so corners are never sampled.
struct BoundaryCurve {
    std::vector<cplx> node;
    std::vector<cplx> tangent;
    std::vector<double> weight;
    double spacing = 0;  // max gap between consecutive nodes
};

BoundaryCurve boundary_nodes(const PlanarDomain& dom, int m_b);

} // namespace dolbeault
