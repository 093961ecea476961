#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "dolbeault/analysis.hpp"
#include "dolbeault/domain.hpp"
#include "dolbeault/rational.hpp"
#include "dolbeault/weights.hpp"

using namespace dolbeault;

namespace {

const double kPi = std::numbers::pi;

ProductGrid disc_product(cplx center, double radius, int res) {
    return make_product({make_grid(PlanarDomain::disc(center, radius), res, 2 * res)});
}

double norm_of(const ScalarFn& f, const ProductGrid& g, const pexp& p, const rat& s) {
    const std::vector<rat> sv{s};
    return weighted_lp_norm(sample_scalar(f, g), g, p, sv);
}

} // namespace

TEST_CASE("unweighted L2 mass of the unit disc is pi") {
    const ProductGrid g = disc_product({0.0, 0.0}, 1.0, 32);
    const double nrm = norm_of([](std::span<const cplx>) { return cplx(1.0, 0.0); }, g,
                               pexp::finite(rat(2)), rat(0));
    CHECK(nrm == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
}

TEST_CASE("product norms factor over the factors") {
    std::vector<FactorGrid> fs{make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), 12, 24),
                               make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), 16, 32)};
    const ProductGrid g = make_product(std::move(fs));
    const std::vector<rat> s{rat(0), rat(0)};
    const double nrm = weighted_lp_norm(sample_scalar([](std::span<const cplx>) { return cplx(1.0, 0.0); }, g),
                                        g, pexp::finite(rat(2)), s);
    CHECK(nrm == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("norms are absolutely homogeneous") {
    const ProductGrid g = disc_product({0.0, 0.0}, 1.0, 16);
    auto f = [](std::span<const cplx> z) { return std::exp(z[0]) + std::conj(z[0]); };
    auto cf = [&](std::span<const cplx> z) { return cplx(0.0, 3.0) * (std::exp(z[0]) + std::conj(z[0])); };
    for (const pexp& p : {pexp::finite(rat(2)), pexp::finite(rat(1)), pexp::infinity()}) {
        const double a = norm_of(f, g, p, rat(1, 3));
        const double b = norm_of(cf, g, p, rat(1, 3));
        CHECK(b == doctest::Approx(3.0 * a).epsilon(1e-12));
    }
}

TEST_CASE("a first-order pole is summable against one extra weight order") {
    // |z|^{-1} in L2 with weight exponent -1 has constant integrand; the
    // norm must recover sqrt(pi) despite the pole at the origin.
    const ProductGrid g = disc_product({0.0, 0.0}, 1.0, 128);
    const double nrm = norm_of([](std::span<const cplx> z) { return cplx(1.0 / std::abs(z[0]), 0.0); },
                               g, pexp::finite(rat(2)), rat(-1));
    CHECK(nrm == doctest::Approx(std::sqrt(kPi)).epsilon(1e-4));
}

TEST_CASE("shifting one weight order onto the field preserves the norm") {
    // Away from the divisor the identity ||f||_{p,s} = || |z|^{-1} f ||_{p,s-1}
    // is exact cell by cell.
    const ProductGrid g = disc_product({2.0, 0.0}, 0.8, 16);
    const auto base = sample_scalar(
        [](std::span<const cplx> z) { return std::exp(z[0]) + std::conj(z[0]); }, g);
    auto shifted = base;
    for (std::size_t t = 0; t < g.total; ++t) shifted[t] /= std::abs(g.coord(t, 0));

    for (const pexp& p : {pexp::finite(rat(2)), pexp::finite(rat(3, 2))}) {
        const std::vector<rat> s0{rat(1, 2)}, s1{rat(-1, 2)};
        const double a = weighted_lp_norm(base, g, p, s0);
        const double b = weighted_lp_norm(shifted, g, p, s1);
        CHECK(b == doctest::Approx(a).epsilon(1e-10));
    }
}

TEST_CASE("sup norms take the weight at the nodes") {
    const int res = 32;
    const ProductGrid g = disc_product({0.0, 0.0}, 1.0, res);
    const double rmax = 1.0 - 0.5 / res;
    const double a = norm_of([](std::span<const cplx> z) { return std::conj(z[0]); }, g,
                             pexp::infinity(), rat(0));
    CHECK(a == doctest::Approx(rmax).epsilon(1e-12));
    const double b = norm_of([](std::span<const cplx> z) { return std::conj(z[0]); }, g,
                             pexp::infinity(), rat(1, 2));
    CHECK(b == doctest::Approx(std::sqrt(rmax)).epsilon(1e-12));
}

TEST_CASE("refinement sweeps separate summable poles from log divergence") {
    const ProductGrid base = disc_product({0.0, 0.0}, 1.0, 16);
    const pexp p2 = pexp::finite(rat(2));
    const std::vector<rat> s0{rat(0)};

    SUBCASE("bounded field converges") {
        const auto pr = norm_probe([](std::span<const cplx>) { return cplx(1.0, 0.0); },
                                   base, p2, s0);
        CHECK_FALSE(pr.diverging);
        CHECK(pr.value.size() == 5);
    }
    SUBCASE("slowly convergent pole stays convergent") {
        const auto pr = norm_probe(
            [](std::span<const cplx> z) { return cplx(std::pow(std::abs(z[0]), -0.6), 0.0); },
            base, p2, s0);
        CHECK_FALSE(pr.diverging);
    }
    SUBCASE("critical pole produces the log divergence") {
        const auto pr = norm_probe(
            [](std::span<const cplx> z) { return cplx(1.0 / std::abs(z[0]), 0.0); },
            base, p2, s0);
        CHECK(pr.diverging);
    }
    SUBCASE("supercritical weight is flagged through the exact innermost mass") {
        const std::vector<rat> s{rat(3, 2)};
        const auto pr = norm_probe(
            [](std::span<const cplx> z) { return cplx(1.0 / std::abs(z[0]), 0.0); },
            base, p2, s);
        CHECK(pr.diverging);
        CHECK(std::isinf(pr.value.front()));
    }
}

TEST_CASE("sampled families are deterministic in the seed") {
    const FactorGrid g = make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), 12, 24);
    const auto a = sample_family(g, 5, 42);
    const auto b = sample_family(g, 5, 42);
    const auto c = sample_family(g, 5, 43);
    REQUIRE(a.size() == b.size());
    CHECK(a.size() == 11);  // monomial seed functions plus the bumps
    bool same = true, differs = false;
    const std::vector<cplx> probe{cplx(0.3, -0.2)};
    for (std::size_t i = 0; i < a.size(); ++i) {
        same = same && a[i].first == b[i].first &&
               a[i].second(probe) == b[i].second(probe);
        differs = differs || a[i].second(probe) != c[i].second(probe);
    }
    CHECK(same);
    CHECK(differs);
}

TEST_CASE("transform ratio tables are finite, stable and monotone in eps") {
    const FactorGrid g = make_grid(PlanarDomain::disc({0.0, 0.0}, 1.0), 24, 48);
    auto family = sample_family(g, 8, 7);
    family.emplace_back("null", [](std::span<const cplx>) { return cplx(0.0, 0.0); });
    const pexp p2 = pexp::finite(rat(2));

    const RatioTable t10 = operator_norm_sample(g, family, p2, rat(0), rat(1, 10), false);
    CHECK(t10.k == 0);
    CHECK_FALSE(t10.any_divergent);
    CHECK(t10.max_ratio > 0.0);
    CHECK(std::isfinite(t10.max_ratio));
    bool null_skipped = false;
    for (const auto& r : t10.row)
        if (r.name == "null") null_skipped = r.skipped;
    CHECK(null_skipped);

    SUBCASE("stable under one refinement") {
        const FactorGrid gf = refine_grid(g, 2.0);
        const RatioTable fine = operator_norm_sample(gf, sample_family(gf, 8, 7), p2,
                                                     rat(0), rat(1, 10), false);
        CHECK(fine.max_ratio == doctest::Approx(t10.max_ratio).epsilon(0.1));
    }
    SUBCASE("larger eps weakens the target weight") {
        const RatioTable t05 = operator_norm_sample(g, family, p2, rat(0), rat(1, 20), false);
        const RatioTable t25 = operator_norm_sample(g, family, p2, rat(0), rat(1, 4), false);
        CHECK(t05.max_ratio >= t10.max_ratio * (1.0 - 1e-12));
        CHECK(t10.max_ratio >= t25.max_ratio * (1.0 - 1e-12));
    }
    SUBCASE("modified weight keeps the target exponent") {
        const RatioTable tm = operator_norm_sample(g, family, p2, rat(1, 2), rat(1, 10), true);
        CHECK(tm.k == 0);  // modified weight of (2, 1/2)
        CHECK(tm.s_target == rat(1, 2));
        CHECK_FALSE(tm.any_divergent);
        CHECK(std::isfinite(tm.max_ratio));
    }
}

TEST_CASE("witness pairs cover both branches, the boundary case and infinity") {
    const auto pairs = witness_pairs();
    REQUIRE(pairs.size() == 6);
    CHECK(pairs[0].first.p == rat(1));
    CHECK(pairs[4].first.inf);

    struct Expected {
        int k, k_mod;
        bool boundary;
    };
    const std::vector<Expected> want{
        {0, -1, false}, {0, 0, true}, {1, 0, false}, {2, 1, false}, {1, 0, false}, {2, 1, false},
    };

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CAPTURE(i);
        const WitnessReport rep = witness_report(pairs[i].first, pairs[i].second);
        CHECK(rep.k == want[i].k);
        CHECK(rep.k_mod == want[i].k_mod);
        CHECK(rep.boundary_case == want[i].boundary);
        REQUIRE(rep.line.size() == 5);
        for (const auto& ln : rep.line) {
            CAPTURE(ln.claim);
            CHECK(ln.match());
        }
        CHECK(rep.all_match);
    }
}

TEST_CASE("witness sweeps flag exactly the escape claims") {
    const WitnessReport rep = witness_report(pexp::finite(rat(2)), rat(1, 2));
    REQUIRE(rep.line.size() == 5);
    CHECK_FALSE(rep.line[0].observed_diverging);
    CHECK_FALSE(rep.line[1].observed_diverging);
    CHECK(rep.line[2].observed_diverging);
    CHECK(rep.line[3].observed_diverging);
    CHECK_FALSE(rep.line[4].observed_diverging);
    CHECK(rep.line[2].sweep.size() == 5);
}
