#include "dolbeault/weights.hpp"

#include <stdexcept>

namespace dolbeault {

namespace {

// 2/p as an exact rational; 0 for p = inf.
rat two_over(const pexp& p) {
    if (p.inf) return rat(0);
    return rat(2) / p.p;
}

template <typename F>
std::vector<int> map_components(const std::vector<rat>& s, F&& f) {
    if (s.empty()) throw std::invalid_argument("weights: empty weight vector");
    std::vector<int> out;
    out.reserve(s.size());
    for (const rat& si : s) out.push_back(f(si));
    return out;
}

} // namespace

int dbar_weight(const pexp& p, rat s) {
    rat t = rat(2) + s - two_over(p);
    if (!p.inf && p.p == rat(1)) return static_cast<int>(floor_rat(t));
    // Largest integer strictly below t.
    if (t.is_integer()) return static_cast<int>(t.num - 1);
    return static_cast<int>(floor_rat(t));
}

int modified_dbar_weight(const pexp& p, rat s) {
    if (p.inf) return static_cast<int>(ceil_rat(s));
    // min{ k : (s - k) p < 2 }  <=>  min{ k : k > s - 2/p }
    return static_cast<int>(floor_rat(s - two_over(p))) + 1;
}

std::pair<int, int> dbar_weight_split(const pexp& p, rat s) {
    long long k0 = floor_rat(s);
    rat frac = s - rat(k0);
    int k1;
    if (p.inf) {
        k1 = (frac == rat(0)) ? 1 : 2;
    } else {
        rat fp = frac * p.p;
        if (fp > rat(2)) k1 = 2;
        else if (fp > rat(2) - p.p) k1 = 1;
        else k1 = 0;
    }
    return {static_cast<int>(k0), k1};
}

bool weight_gap_vanishes(const pexp& p, rat s) {
    if (p.inf) return false;
    if (p.p == rat(1)) return false;
    rat fp = (s - rat(floor_rat(s))) * p.p;
    return fp == rat(2) || fp == rat(2) - p.p;
}

int weight_gap(const pexp& p, rat s) { return dbar_weight(p, s) - modified_dbar_weight(p, s); }

std::vector<int> dbar_weight(const pexp& p, const std::vector<rat>& s) {
    return map_components(s, [&](rat si) { return dbar_weight(p, si); });
}

std::vector<int> modified_dbar_weight(const pexp& p, const std::vector<rat>& s) {
    return map_components(s, [&](rat si) { return modified_dbar_weight(p, si); });
}

std::vector<int> weight_gap(const pexp& p, const std::vector<rat>& s) {
    return map_components(s, [&](rat si) { return weight_gap(p, si); });
}

} // namespace dolbeault
