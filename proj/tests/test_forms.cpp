#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dolbeault/domain.hpp"
#include "dolbeault/forms.hpp"
#include "dolbeault/rational.hpp"

using namespace dolbeault;

namespace {

ProductGrid unit_disc_product(int res, int copies = 1) {
    std::vector<FactorGrid> fs;
    for (int j = 0; j < copies; ++j)
        fs.push_back(make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), res, 2 * res));
    return make_product(std::move(fs));
}

ProductGrid rect_product(cplx lo, cplx hi, int nx, int ny, int copies = 1) {
    std::vector<FactorGrid> fs;
    for (int j = 0; j < copies; ++j)
        fs.push_back(make_grid(PlanarDomain::rectangle(lo, hi), nx, ny));
    return make_product(std::move(fs));
}

// (0,0)-form holding pointwise samples of f.
Form0q sampled0(const ProductGrid& g, const std::function<cplx(std::span<const cplx>)>& f) {
    Form0q w = Form0q::zero(g, 0);
    std::vector<cplx> z(static_cast<std::size_t>(g.n()));
    for (std::size_t t = 0; t < g.total; ++t) {
        for (int j = 0; j < g.n(); ++j) z[j] = g.coord(t, j);
        w.coef[0][t] = f(z);
    }
    return w;
}

double sup_err_against(const std::vector<cplx>& got, const ProductGrid& g,
                       const std::function<cplx(std::span<const cplx>)>& want) {
    double worst = 0.0;
    std::vector<cplx> z(static_cast<std::size_t>(g.n()));
    for (std::size_t t = 0; t < g.total; ++t) {
        for (int j = 0; j < g.n(); ++j) z[j] = g.coord(t, j);
        worst = std::max(worst, std::abs(got[t] - want(z)));
    }
    return worst;
}

} // namespace

TEST_CASE("increasing subsets enumerate in ascending mask order") {
    CHECK(increasing_subsets(3, 0) == std::vector<unsigned>{0u});
    CHECK(increasing_subsets(3, 1) == std::vector<unsigned>{0b001u, 0b010u, 0b100u});
    CHECK(increasing_subsets(3, 2) == std::vector<unsigned>{0b011u, 0b101u, 0b110u});
    CHECK(increasing_subsets(3, 3) == std::vector<unsigned>{0b111u});
    CHECK(increasing_subsets(4, 2).size() == 6);
    CHECK(increasing_subsets(2, 3).empty());
    CHECK_THROWS_AS(increasing_subsets(25, 1), std::invalid_argument);
}

TEST_CASE("insertion sign counts transpositions past lower axes") {
    CHECK(insertion_sign(0b000u, 0) == 1);
    CHECK(insertion_sign(0b000u, 3) == 1);
    CHECK(insertion_sign(0b001u, 1) == -1);
    CHECK(insertion_sign(0b010u, 0) == 1);   // axis below the whole set
    CHECK(insertion_sign(0b011u, 2) == 1);   // two transpositions
    CHECK(insertion_sign(0b101u, 1) == -1);  // one element below axis 1
    CHECK(insertion_sign(0b111u, 3) == -1);
}

TEST_CASE("form components are addressable by mask and reassemble exactly") {
    const ProductGrid g = unit_disc_product(6, 2);
    Form0q w = Form0q::zero(g, 1);
    CHECK(w.mask == std::vector<unsigned>{0b01u, 0b10u});
    CHECK(w.find(0b01u) == 0);
    CHECK(w.find(0b11u) == -1);
    CHECK_THROWS_AS(w[0b11u], std::out_of_range);

    for (std::size_t t = 0; t < g.total; ++t) {
        w[0b01u][t] = cplx(1.0, 2.0) * g.coord(t, 1);
        w[0b10u][t] = std::conj(g.coord(t, 0));
    }

    // Axis-0 part holds exactly the dzbar_1 component, the rest the other.
    auto [with0, rest0] = split_axis(w, 0);
    CHECK(with0[0b01u] == w[0b01u]);
    CHECK(rest0[0b01u] == std::vector<cplx>(g.total, cplx(0.0, 0.0)));
    CHECK(rest0[0b10u] == w[0b10u]);
    CHECK(with0[0b10u] == std::vector<cplx>(g.total, cplx(0.0, 0.0)));

    const Form0q back = axpy_form(cplx(1.0, 0.0), with0, rest0);
    for (std::size_t c = 0; c < w.mask.size(); ++c) CHECK(back.coef[c] == w.coef[c]);

    const Form0q tw = scaled_form(cplx(0.0, 2.0), w);
    CHECK(tw[0b10u][3] == cplx(0.0, 2.0) * w[0b10u][3]);
}

TEST_CASE("linear algebra on mismatched forms is rejected") {
    const ProductGrid g = unit_disc_product(6, 1);
    const Form0q a = Form0q::zero(g, 0);
    const Form0q b = Form0q::zero(g, 1);
    CHECK_THROWS_AS(axpy_form(cplx(1.0, 0.0), a, b), std::invalid_argument);
}

TEST_CASE("rectangle stencils are exact on low-degree polynomials") {
    const ProductGrid g = rect_product({-1.0, -1.0}, {1.0, 1.0}, 8, 7);

    auto check_dbar = [&](const std::function<cplx(std::span<const cplx>)>& f,
                          const std::function<cplx(std::span<const cplx>)>& df, double tol) {
        const Form0q w = sampled0(g, f);
        const Form0q dw = dbar_numeric(w);
        REQUIRE(dw.q == 1);
        CHECK(sup_err_against(dw[0b1u], g, df) <= tol);
    };

    check_dbar([](std::span<const cplx> z) { return std::conj(z[0]); },
               [](std::span<const cplx>) { return cplx(1.0, 0.0); }, 1e-13);
    check_dbar([](std::span<const cplx> z) { return z[0] * z[0]; },
               [](std::span<const cplx>) { return cplx(0.0, 0.0); }, 1e-13);
    check_dbar([](std::span<const cplx> z) { return std::conj(z[0]) * std::conj(z[0]); },
               [](std::span<const cplx> z) { return 2.0 * std::conj(z[0]); }, 1e-12);
    // Mixed cubic: still inside the exactness degree of the 5-point stencils.
    check_dbar(
        [](std::span<const cplx> z) { return std::conj(z[0]) * std::conj(z[0]) * z[0] + std::conj(z[0]); },
        [](std::span<const cplx> z) { return 2.0 * std::conj(z[0]) * z[0] + 1.0; }, 1e-12);
}

TEST_CASE("polar stencils converge at fourth order") {
    auto run = [&](int res) {
        const ProductGrid g = unit_disc_product(res);
        const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::conj(z[0]); });
        const Form0q dw = dbar_numeric(w);
        return sup_err_against(dw[0b1u], g, [](std::span<const cplx>) { return cplx(1.0, 0.0); });
    };
    const double e16 = run(16);
    const double e32 = run(32);
    CHECK(e16 < 2e-4);
    CHECK(e16 / e32 > 10.0);

    // Entire function: no dzbar part at all.
    const ProductGrid g = unit_disc_product(32);
    const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::exp(z[0]); });
    const Form0q dw = dbar_numeric(w);
    CHECK(sup_norm(dw) < 1e-3);
}

TEST_CASE("antisymmetry cancels matching coefficients in degree one") {
    // omega = conj(z2) dzbar_1 + conj(z1) dzbar_2 is closed; on rectangles the
    // cancellation is exact because the coefficients are linear.
    const ProductGrid g = rect_product({-1.0, -1.0}, {1.0, 1.0}, 6, 5, 2);
    Form0q w = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) {
        w[0b01u][t] = std::conj(g.coord(t, 1));
        w[0b10u][t] = std::conj(g.coord(t, 0));
    }
    const Form0q dw = dbar_numeric(w);
    REQUIRE(dw.q == 2);
    CHECK(sup_norm(dw) <= 1e-13);

    const Form0q h = sampled0(g, [](std::span<const cplx> z) { return z[0] * z[1]; });
    CHECK(sup_norm(dbar_numeric(h)) <= 1e-13);
}

TEST_CASE("dbar composed with itself vanishes to rounding") {
    // The per-axis difference operators act on separate tensor factors, so
    // the mixed terms cancel exactly and only rounding survives.
    SUBCASE("two rectangle factors") {
        const ProductGrid g = rect_product({-1.0, 0.0}, {1.0, 1.0}, 7, 5, 2);
        const Form0q w = sampled0(g, [](std::span<const cplx> z) {
            return std::conj(z[0]) * std::conj(z[1]) + z[0] * std::conj(z[1]) * std::conj(z[1]);
        });
        const Form0q ddw = dbar_numeric(dbar_numeric(w));
        REQUIRE(ddw.q == 2);
        CHECK(sup_norm(ddw) <= 1e-12);
    }
    SUBCASE("two polar factors") {
        const ProductGrid g = unit_disc_product(12, 2);
        const Form0q w = sampled0(g, [](std::span<const cplx> z) {
            return std::exp(z[0]) * std::conj(z[1]) + std::conj(z[0]) * std::conj(z[1]);
        });
        CHECK(sup_norm(dbar_numeric(dbar_numeric(w))) <= 1e-11);
    }
    SUBCASE("three rectangle factors, degree one input") {
        const ProductGrid g = rect_product({-1.0, -1.0}, {1.0, 1.0}, 6, 5, 3);
        Form0q w = Form0q::zero(g, 1);
        for (std::size_t t = 0; t < g.total; ++t) {
            w[0b001u][t] = std::conj(g.coord(t, 1)) * std::conj(g.coord(t, 2));
            w[0b010u][t] = std::conj(g.coord(t, 0));
            w[0b100u][t] = std::conj(g.coord(t, 0)) * std::conj(g.coord(t, 1));
        }
        const Form0q ddw = dbar_numeric(dbar_numeric(w));
        REQUIRE(ddw.q == 3);
        CHECK(sup_norm(ddw) <= 1e-12);
    }
}

TEST_CASE("top-degree forms differentiate to the empty form") {
    const ProductGrid g = unit_disc_product(8);
    Form0q w = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) w[0b1u][t] = std::conj(g.coord(t, 0));
    const Form0q dw = dbar_numeric(w);
    CHECK(dw.q == 2);
    CHECK(dw.mask.empty());
    CHECK(sup_norm(dw) == 0.0);
}

TEST_CASE("zero weights reproduce the plain operator bitwise") {
    const ProductGrid g = unit_disc_product(8, 2);
    const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::exp(z[0] + z[1]) + std::conj(z[0]); });
    const std::vector<int> k{0, 0};
    const Form0q a = dbar_weighted(w, k);
    const Form0q b = dbar_numeric(w);
    REQUIRE(a.mask == b.mask);
    for (std::size_t c = 0; c < a.mask.size(); ++c)
        for (std::size_t t = 0; t < g.total; ++t) CHECK(a.coef[c][t] == b.coef[c][t]);
}

TEST_CASE("weighted and plain paths agree away from the divisor") {
    // On a grid bounded away from z = 0 the conjugation by z^k is smooth, so
    // z^k dbar(z^{-k} omega) and dbar(omega) must coincide within stencil
    // error; the plain path is exact here, which isolates the weighted one.
    const ProductGrid g = rect_product({4.0, 0.0}, {5.0, 1.0}, 49, 49);
    const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::conj(z[0]); });
    const Form0q plain = dbar_numeric(w);

    for (int kk : {1, 2}) {
        const std::vector<int> k{kk};
        const Form0q weighted = dbar_weighted(w, k);
        const Form0q diff = axpy_form(cplx(-1.0, 0.0), plain, weighted);
        CHECK(sup_norm(diff) <= 1e-6);
    }
}

TEST_CASE("weighted operator annihilates weight-aligned holomorphic multiples") {
    // f = z1 h with h entire is closed for the weight k = (1, 0): the
    // conjugated field z1^{-1} f is smooth, so the residual is stencil error.
    const std::vector<int> k{1, 0};
    auto residual = [&](int res) {
        const ProductGrid g = unit_disc_product(res, 2);
        const Form0q w =
            sampled0(g, [](std::span<const cplx> z) { return z[0] * std::exp(z[0] + z[1]); });
        return sup_norm(dbar_weighted(w, k));
    };
    const double r16 = residual(16);
    const double r24 = residual(24);
    CHECK(r24 < 5e-3);
    CHECK(r24 < r16);
}

TEST_CASE("weighted operator sees through the weight on singular input") {
    // dbar_1(z^{-1} conj(z)) = z^{-1}, so the weighted derivative of conj(z)
    // equals 1 wherever the finite differences can be trusted.
    const ProductGrid g = unit_disc_product(16);
    const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::conj(z[0]); });
    const std::vector<int> k{1};
    const Form0q dk = dbar_weighted(w, k);

    double worst = 0.0;
    for (std::size_t t = 0; t < g.total; ++t) {
        if (std::abs(g.coord(t, 0)) < 0.5) continue;
        worst = std::max(worst, std::abs(dk[0b1u][t] - 1.0));
    }
    CHECK(worst < 5e-3);
}

TEST_CASE("wedge with a gradient field matches the product rule") {
    // dbar(g wedge omega) = (dbar g) wedge omega + g dbar(omega) for scalar g;
    // check the first term in isolation on polynomials where all is exact.
    const ProductGrid g = rect_product({-1.0, -1.0}, {1.0, 1.0}, 7, 6, 2);
    Form0q w = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) w[0b10u][t] = std::conj(g.coord(t, 1));

    std::vector<cplx> grad(g.total);
    for (std::size_t t = 0; t < g.total; ++t) grad[t] = 2.0 * std::conj(g.coord(t, 0));

    // (dbar of conj(z1)^2 along axis 0) wedge (conj(z2) dzbar_2).
    const Form0q wedge = wedge_dbar_axis(0, grad, w);
    REQUIRE(wedge.q == 2);
    double worst = 0.0;
    for (std::size_t t = 0; t < g.total; ++t)
        worst = std::max(worst,
                         std::abs(wedge[0b11u][t] - 2.0 * std::conj(g.coord(t, 0)) * std::conj(g.coord(t, 1))));
    CHECK(worst <= 1e-13);
}

TEST_CASE("gamma classes track the highest axis in use") {
    const ProductGrid g = unit_disc_product(6, 2);
    Form0q w = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) w[0b01u][t] = std::conj(g.coord(t, 1));

    CHECK(gamma_class(w, nullptr, 1));
    CHECK(gamma_class(w, nullptr, 2));
    CHECK_FALSE(gamma_class(w, nullptr, 0));

    // The derivative drags in dzbar_2, which leaves the smallest class.
    const Form0q dw = dbar_numeric(w);
    CHECK_FALSE(gamma_class(w, &dw, 1));
    CHECK(gamma_class(w, &dw, 2));

    // A form whose derivative stays clean remains in the class (up to
    // stencil noise, absorbed by the tolerance).
    Form0q v = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) v[0b01u][t] = std::conj(g.coord(t, 0));
    const Form0q dv = dbar_numeric(v);
    CHECK(gamma_class(v, &dv, 1, 1e-10));

    Form0q top = Form0q::zero(g, 1);
    for (std::size_t t = 0; t < g.total; ++t) top[0b10u][t] = 1.0;
    CHECK_FALSE(gamma_class(top, nullptr, 1));
    CHECK(gamma_class(top, nullptr, 2));
}

TEST_CASE("coarse grids are rejected before differencing") {
    std::vector<FactorGrid> fs;
    fs.push_back(make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), 4, 8));
    const ProductGrid g = make_product(std::move(fs));
    const Form0q w = sampled0(g, [](std::span<const cplx> z) { return std::conj(z[0]); });
    CHECK_THROWS_AS(dbar_numeric(w), std::invalid_argument);
}

TEST_CASE("kernel membership separates aligned, misaligned and zero inputs") {
    const ProductGrid g = unit_disc_product(24);
    const pexp p2 = pexp::finite(rat(2));
    const std::vector<rat> s{rat(1, 2)};  // weights: k = 1, modified 0

    SUBCASE("weight-aligned holomorphic multiple belongs") {
        const auto rep = kernel_membership_q0(
            [](std::span<const cplx> z) { return z[0] * std::exp(z[0]); }, g, p2, s);
        CHECK(rep.member);
        CHECK(rep.holo_defect <= 1e-3);
        CHECK(rep.norm_stable);
    }
    SUBCASE("closed but too singular for the norm fails") {
        const auto rep = kernel_membership_q0(
            [](std::span<const cplx> z) { return 1.0 / z[0]; }, g, p2, s);
        CHECK_FALSE(rep.member);
    }
    SUBCASE("zero belongs") {
        const auto rep = kernel_membership_q0(
            [](std::span<const cplx>) { return cplx(0.0, 0.0); }, g, p2, s);
        CHECK(rep.member);
    }
    SUBCASE("non-closed input is rejected up front") {
        CHECK_THROWS_AS(kernel_membership_q0(
                            [](std::span<const cplx> z) { return std::conj(z[0]); }, g, p2, s),
                        std::invalid_argument);
    }
}
