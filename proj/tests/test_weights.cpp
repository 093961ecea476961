#include "doctest.h"

#include <optional>
#include <vector>

#include "dolbeault/weights.hpp"

using namespace dolbeault;

namespace {

// Brute-force oracles: scan the defining inequalities directly over a window
// of integers wide enough for |s| <= 3.  These deliberately do not share any
// logic with the closed forms in src/weights.cpp.
std::optional<int> oracle_dbar_weight(const pexp& p, rat s) {
    std::optional<int> best;
    for (int m = -10; m <= 10; ++m) {
        bool ok;
        if (p.inf) {
            ok = rat(m) < rat(2) + s;
        } else if (p.p == rat(1)) {
            ok = rat(m) <= rat(2) + s - rat(2) / p.p;
        } else {
            ok = rat(m) < rat(2) + s - rat(2) / p.p;
        }
        if (ok) best = m;
    }
    return best;
}

std::optional<int> oracle_modified_dbar_weight(const pexp& p, rat s) {
    for (int k = -10; k <= 10; ++k) {
        bool ok = p.inf ? (s - rat(k) <= rat(0)) : ((s - rat(k)) * p.p < rat(2));
        if (ok) return k;
    }
    return std::nullopt;
}

std::vector<pexp> acceptance_p_grid() {
    return {pexp::finite(rat(1)),    pexp::finite(rat(9, 8)), pexp::finite(rat(3, 2)),
            pexp::finite(rat(2)),    pexp::finite(rat(3)),    pexp::finite(rat(4)),
            pexp::finite(rat(10)),   pexp::infinity()};
}

std::vector<rat> acceptance_s_grid() {
    std::vector<rat> s;
    for (int i = -36; i <= 36; ++i) s.push_back(rat(i, 12));
    return s;
}

} // namespace

TEST_CASE("rational arithmetic is exact") {
    CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
    CHECK(rat(7, 2) - rat(4) == rat(-1, 2));
    CHECK(rat(-3, 9) == rat(-1, 3));
    CHECK(rat(2, -4) == rat(-1, 2));
    CHECK(rat(3, 4) * rat(8, 9) == rat(2, 3));
    CHECK(rat(1, 3) / rat(2, 3) == rat(1, 2));
    CHECK(floor_rat(rat(7, 2)) == 3);
    CHECK(floor_rat(rat(-7, 2)) == -4);
    CHECK(floor_rat(rat(4)) == 4);
    CHECK(ceil_rat(rat(1, 3)) == 1);
    CHECK(ceil_rat(rat(-1, 3)) == 0);
    CHECK(parse_rat("-7/2") == rat(-7, 2));
    CHECK(parse_rat("5") == rat(5));
    CHECK(to_string(rat(5, 3)) == "5/3");
    CHECK_THROWS_AS(rat(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(parse_rat("x"), std::invalid_argument);
    CHECK(parse_pexp("inf").inf);
    CHECK(parse_pexp("3/2").p == rat(3, 2));
    CHECK_THROWS_AS(parse_pexp("1/2"), std::invalid_argument);
}

TEST_CASE("dbar weight fixed values") {
    CHECK(dbar_weight(pexp::finite(rat(1)), rat(0)) == 0);
    CHECK(dbar_weight(pexp::finite(rat(2)), rat(0)) == 0);
    CHECK(dbar_weight(pexp::infinity(), rat(0)) == 1);
    CHECK(dbar_weight(pexp::finite(rat(2)), rat(1, 2)) == 1);
}

TEST_CASE("dbar weight split fixed values") {
    CHECK(dbar_weight_split(pexp::finite(rat(1)), rat(7, 2)) == std::pair<int, int>{3, 0});
    CHECK(dbar_weight_split(pexp::finite(rat(4)), rat(0)) == std::pair<int, int>{0, 1});
    CHECK(dbar_weight_split(pexp::infinity(), rat(1, 3)) == std::pair<int, int>{0, 2});
}

TEST_CASE("modified dbar weight fixed values") {
    CHECK(modified_dbar_weight(pexp::finite(rat(2)), rat(0)) == 0);
    CHECK(modified_dbar_weight(pexp::infinity(), rat(0)) == 0);
    CHECK(modified_dbar_weight(pexp::finite(rat(2)), rat(3, 2)) == 1);
}

TEST_CASE("weight gap fixed values") {
    CHECK(weight_gap(pexp::finite(rat(2)), rat(0)) == 0);
    CHECK(weight_gap(pexp::finite(rat(2)), rat(1, 2)) == 1);
    // p = 1 never meets the vanishing predicate: the gap is 1 for every s,
    // integer s included (enumeration of both defining inequalities).
    CHECK(weight_gap(pexp::finite(rat(1)), rat(2)) == 1);
    CHECK(weight_gap(pexp::finite(rat(4)), rat(1, 2)) == 0);
}

TEST_CASE("closed forms match enumeration on the acceptance grid") {
    int mismatches = 0;
    for (const pexp& p : acceptance_p_grid()) {
        for (const rat& s : acceptance_s_grid()) {
            auto k = oracle_dbar_weight(p, s);
            auto kt = oracle_modified_dbar_weight(p, s);
            REQUIRE(k.has_value());
            REQUIRE(kt.has_value());
            if (dbar_weight(p, s) != *k) ++mismatches;
            if (modified_dbar_weight(p, s) != *kt) ++mismatches;
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("split law holds on the acceptance grid") {
    for (const pexp& p : acceptance_p_grid()) {
        for (const rat& s : acceptance_s_grid()) {
            auto [k0, k1] = dbar_weight_split(p, s);
            CHECK(k0 == static_cast<int>(floor_rat(s)));
            CHECK(k1 >= 0);
            CHECK(k1 <= 2);
            CHECK(k0 + k1 == dbar_weight(p, s));
            if (!p.inf && p.p == rat(1)) CHECK(k1 == 0);
        }
    }
}

TEST_CASE("gap law holds on the acceptance grid") {
    for (const pexp& p : acceptance_p_grid()) {
        for (const rat& s : acceptance_s_grid()) {
            int gap = weight_gap(p, s);
            CHECK((gap == 0 || gap == 1));
            CHECK(modified_dbar_weight(p, s) + gap == dbar_weight(p, s));
            CHECK((gap == 0) == weight_gap_vanishes(p, s));
        }
    }
}

TEST_CASE("weights are monotone in s and satisfy shift covariance") {
    for (const pexp& p : acceptance_p_grid()) {
        auto sgrid = acceptance_s_grid();
        for (size_t i = 0; i + 1 < sgrid.size(); ++i) {
            CHECK(dbar_weight(p, sgrid[i]) <= dbar_weight(p, sgrid[i + 1]));
            CHECK(modified_dbar_weight(p, sgrid[i]) <= modified_dbar_weight(p, sgrid[i + 1]));
        }
        for (const rat& s : sgrid) {
            CHECK(dbar_weight(p, s + rat(1)) == dbar_weight(p, s) + 1);
            CHECK(modified_dbar_weight(p, s + rat(1)) == modified_dbar_weight(p, s) + 1);
        }
    }
}

TEST_CASE("weights are monotone in p") {
    auto pgrid = acceptance_p_grid();
    for (const rat& s : acceptance_s_grid()) {
        for (size_t i = 0; i + 1 < pgrid.size(); ++i) {
            CHECK(dbar_weight(pgrid[i], s) <= dbar_weight(pgrid[i + 1], s));
            CHECK(modified_dbar_weight(pgrid[i], s) <= modified_dbar_weight(pgrid[i + 1], s));
        }
    }
}

TEST_CASE("componentwise variants") {
    pexp p = pexp::finite(rat(2));
    std::vector<rat> s = {rat(0), rat(1, 2), rat(-7, 2)};
    auto k = dbar_weight(p, s);
    auto kt = modified_dbar_weight(p, s);
    auto g = weight_gap(p, s);
    REQUIRE(k.size() == 3);
    for (size_t j = 0; j < s.size(); ++j) {
        CHECK(k[j] == dbar_weight(p, s[j]));
        CHECK(kt[j] == modified_dbar_weight(p, s[j]));
        CHECK(g[j] == k[j] - kt[j]);
    }
    CHECK_THROWS_AS(dbar_weight(p, std::vector<rat>{}), std::invalid_argument);
    CHECK_THROWS_AS(weight_gap(p, std::vector<rat>{}), std::invalid_argument);
}
