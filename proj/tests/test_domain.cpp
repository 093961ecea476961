#include "dolbeault/domain.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace dolbeault;

namespace {
constexpr double pi = std::numbers::pi;

cplx contour_integral(const BoundaryCurve& c, const std::function<cplx(cplx)>& g) {
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < c.node.size(); ++i) acc += g(c.node[i]) * c.tangent[i] * c.weight[i];
    return acc;
}
} // namespace

TEST_CASE("planar domains: geometry predicates") {
    auto d = PlanarDomain::disc(cplx(0.5, -0.25), 2.0);
    CHECK(d.contains(cplx(0.5, -0.25)));
    CHECK(d.contains(cplx(2.4, -0.25)));
    CHECK_FALSE(d.contains(cplx(2.6, -0.25)));
    CHECK(d.boundary_distance(cplx(0.5, -0.25)) == doctest::Approx(2.0));
    CHECK(d.boundary_distance(cplx(1.5, -0.25)) == doctest::Approx(1.0));
    CHECK(d.diameter() == doctest::Approx(4.0));
    CHECK(d.area() == doctest::Approx(4.0 * pi));

    auto r = PlanarDomain::rectangle(cplx(-1.0, 0.0), cplx(2.0, 1.0));
    CHECK(r.center == cplx(0.5, 0.5));
    CHECK(r.contains(cplx(0.0, 0.5)));
    CHECK_FALSE(r.contains(cplx(-1.0, 0.5)));  // open interior
    CHECK(r.area() == doctest::Approx(3.0));
    CHECK(r.diameter() == doctest::Approx(std::hypot(3.0, 1.0)));
    CHECK(r.boundary_distance(cplx(0.0, 0.25)) == doctest::Approx(0.25));
    CHECK(r.boundary_distance(cplx(3.0, 0.5)) == doctest::Approx(1.0));   // outside, right
    CHECK(r.boundary_distance(cplx(3.0, 2.0)) == doctest::Approx(std::hypot(1.0, 1.0)));

    auto s = r.scaled(0.5);
    CHECK(s.center == r.center);
    CHECK(s.area() == doctest::Approx(0.25 * r.area()));
    CHECK(d.scaled(0.5).radius == doctest::Approx(1.0));

    CHECK_THROWS_AS(PlanarDomain::disc(cplx(0, 0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PlanarDomain::rectangle(cplx(1, 0), cplx(0, 1)), std::invalid_argument);
}

TEST_CASE("polar grids tile the disc exactly") {
    auto dom = PlanarDomain::disc(cplx(0.0, 0.0), 1.5);
    auto g = make_grid(dom, 6, 16);
    REQUIRE(g.size() == 96);
    CHECK(g.polar);

    double asum = 0;
    for (double a : g.area) asum += a;
    CHECK(asum == doctest::Approx(dom.area()).epsilon(1e-13));

    // Nodes sit at cell centers and map back to their own cell.
    for (std::size_t c = 0; c < g.size(); ++c) {
        CHECK(g.cell_of(g.node[c]) == static_cast<int>(c));
        CHECK(g.g0[c] < std::abs(g.node[c]) + 1e-15);
        CHECK(std::abs(g.node[c]) < g.g1[c]);
    }
    CHECK(g.cell_of(cplx(1.6, 0.0)) == -1);
    CHECK(g.innermost(3));
    CHECK_FALSE(g.innermost(16));
    CHECK(g.spacing() == doctest::Approx(0.25));

    // No node on the center even though ring 0 touches it.
    for (auto z : g.node) CHECK(std::abs(z) > 0.1);

    CHECK_THROWS_AS(make_grid(dom, 1, 16), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(dom, 4, 7), std::invalid_argument);
}

TEST_CASE("cartesian grids tile the rectangle exactly") {
    auto dom = PlanarDomain::rectangle(cplx(-1.0, -0.5), cplx(1.0, 0.5));
    auto g = make_grid(dom, 8, 4);
    REQUIRE(g.size() == 32);
    CHECK_FALSE(g.polar);
    CHECK(g.n1 == 4);
    CHECK(g.n2 == 8);

    double asum = 0;
    for (double a : g.area) asum += a;
    CHECK(asum == doctest::Approx(dom.area()).epsilon(1e-13));

    for (std::size_t c = 0; c < g.size(); ++c) CHECK(g.cell_of(g.node[c]) == static_cast<int>(c));
    CHECK(g.cell_of(cplx(0.0, 0.7)) == -1);
    CHECK_FALSE(g.innermost(0));

    // Row-major layout: cell (iy, ix) at index iy * nx + ix.
    CHECK(g.node[1 * 8 + 3] == cplx(-1.0 + 3.5 * 0.25, -0.5 + 1.5 * 0.25));
}

TEST_CASE("product grids: strides and index round trips") {
    auto d1 = make_grid(PlanarDomain::disc(cplx(0, 0), 1.0), 3, 8);
    auto d2 = make_grid(PlanarDomain::rectangle(cplx(0, 0), cplx(1, 1)), 4, 5);
    auto p = make_product({d1, d2});
    REQUIRE(p.n() == 2);
    CHECK(p.total == d1.size() * d2.size());
    CHECK(p.stride[0] == d2.size());
    CHECK(p.stride[1] == 1);

    std::vector<int> idx(2);
    for (std::size_t flat = 0; flat < p.total; flat += 7) {
        p.decompose(flat, idx);
        CHECK(p.index(idx) == flat);
        CHECK(p.coord(flat, 0) == d1.node[idx[0]]);
        CHECK(p.coord(flat, 1) == d2.node[idx[1]]);
    }
    CHECK_THROWS_AS(make_product({}), std::invalid_argument);
}

TEST_CASE("circle contours integrate Laurent monomials exactly") {
    auto dom = PlanarDomain::disc(cplx(0, 0), 1.0);
    auto c = boundary_nodes(dom, 64);
    REQUIRE(c.node.size() == 64);

    for (int m = -4; m <= 4; ++m) {
        cplx want = (m == -1) ? cplx(0.0, 2.0 * pi) : cplx(0.0, 0.0);
        cplx got = contour_integral(c, [&](cplx z) { return std::pow(z, m); });
        CHECK(std::abs(got - want) < 1e-12);
    }

    // Cauchy integral of 1 at an interior point: periodic trapezoid converges
    // geometrically, so 64 nodes already give full precision here.
    cplx z0(0.3, 0.2);
    cplx got = contour_integral(c, [&](cplx z) { return 1.0 / (z - z0); });
    CHECK(std::abs(got - cplx(0.0, 2.0 * pi)) < 1e-12);

    // Scaled and shifted circle.
    auto c2 = boundary_nodes(PlanarDomain::disc(cplx(1.0, -1.0), 0.5), 48);
    cplx got2 = contour_integral(c2, [&](cplx z) { return 1.0 / (z - cplx(1.1, -1.0)); });
    CHECK(std::abs(got2 - cplx(0.0, 2.0 * pi)) < 1e-10);
}

TEST_CASE("rectangle contours: exact for linear integrands, counterclockwise") {
    auto dom = PlanarDomain::rectangle(cplx(-1.0, -2.0), cplx(3.0, 1.0));
    auto c = boundary_nodes(dom, 40);
    CHECK(static_cast<int>(c.node.size()) == 40);

    // Midpoint rule is exact for polynomials of degree 1 on each edge.
    CHECK(std::abs(contour_integral(c, [](cplx) { return cplx(1.0, 0.0); })) < 1e-13);
    CHECK(std::abs(contour_integral(c, [](cplx z) { return z; })) < 1e-12);
    cplx got = contour_integral(c, [](cplx z) { return std::conj(z); });
    CHECK(std::abs(got.real()) < 1e-12);
    CHECK(got.imag() == doctest::Approx(2.0 * dom.area()).epsilon(1e-12));

    // Interior winding number 1 needs resolution on a contour with corners.
    auto cf = boundary_nodes(dom, 4000);
    cplx w = contour_integral(cf, [](cplx z) { return 1.0 / (z - cplx(0.5, -0.5)); });
    CHECK(std::abs(w - cplx(0.0, 2.0 * pi)) < 1e-2);

    CHECK_THROWS_AS(boundary_nodes(dom, 3), std::invalid_argument);
}
