#include "dolbeault/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dolbeault/parallel.hpp"

namespace dolbeault {

namespace {

int default_mb(const FactorGrid& f) { return std::max(512, 4 * f.n2); }

void check_form(const SmoothForm& w, const ProductGrid& g, const char* who) {
    if (w.n != g.n() || w.q < 0 || w.q > w.n)
        throw std::invalid_argument(std::string(who) + ": form does not match the grid");
    if (!w.coef) throw std::invalid_argument(std::string(who) + ": missing coefficients");
}

// Evaluate one coefficient callable over the whole grid.
std::vector<cplx> sample_component(const std::function<cplx(unsigned, std::span<const cplx>)>& fn,
                                   unsigned mask, const ProductGrid& g) {
    std::vector<cplx> out(g.total);
    const int n = g.n();
    parallel_for(g.total, [&](std::size_t t) {
        thread_local std::vector<cplx> zbuf;
        zbuf.resize(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) zbuf[j] = g.coord(t, j);
        out[t] = fn(mask, zbuf);
    });
    return out;
}

} // namespace

Form0q sample_form(const SmoothForm& w, const ProductGrid& g) {
    check_form(w, g, "sample_form");
    Form0q out = Form0q::zero(g, w.q);
    for (std::size_t c = 0; c < out.mask.size(); ++c)
        out.coef[c] = sample_component(w.coef, out.mask[c], g);
    return out;
}

Form0q sample_dbar(const SmoothForm& w, const ProductGrid& g) {
    check_form(w, g, "sample_dbar");
    Form0q out = Form0q::zero(g, w.q + 1);
    if (w.q >= w.n) return out;  // top degree: nothing to fill
    if (!w.dbar) throw std::invalid_argument("sample_dbar: missing dbar coefficients");
    for (std::size_t c = 0; c < out.mask.size(); ++c)
        out.coef[c] = sample_component(w.dbar, out.mask[c], g);
    return out;
}

Form0q axis_area_op(const Form0q& w, int axis, const FactorKernel& kern) {
    if (w.grid == nullptr) throw std::invalid_argument("axis_area_op: unbound form");
    const ProductGrid& g = *w.grid;
    if (axis < 0 || axis >= w.n) throw std::invalid_argument("axis_area_op: bad axis");
    if (w.q < 1) throw std::invalid_argument("axis_area_op: positive degree required");

    Form0q out = Form0q::zero(g, w.q - 1);
    const unsigned bit = 1u << axis;
    std::vector<cplx> tmp(g.total);
    for (std::size_t c = 0; c < w.mask.size(); ++c) {
        if (!(w.mask[c] & bit)) continue;
        const unsigned K = w.mask[c] & ~bit;
        const double sg = insertion_sign(K, axis);
        axis_area_apply(g, axis, kern, w.coef[c], tmp);
        auto& oc = out[K];
        parallel_for(g.total, [&](std::size_t t) { oc[t] = sg * tmp[t]; });
    }
    return out;
}

Form0q axis_boundary_op(const SmoothForm& w, const ProductGrid& g, int axis,
                        const BoundaryCurve& curve, int k) {
    check_form(w, g, "axis_boundary_op");
    if (axis < 0 || axis >= w.n) throw std::invalid_argument("axis_boundary_op: bad axis");

    Form0q out = Form0q::zero(g, w.q);
    const unsigned bit = 1u << axis;
    const int n = g.n();
    for (std::size_t c = 0; c < out.mask.size(); ++c) {
        if (out.mask[c] & bit) continue;  // dropped components stay zero
        const unsigned J = out.mask[c];
        axis_boundary_apply(
            g, axis, curve, k,
            [&](std::size_t fiber_base, int bnode) {
                thread_local std::vector<cplx> zbuf;
                zbuf.resize(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j) zbuf[j] = g.coord(fiber_base, j);
                zbuf[axis] = curve.node[static_cast<std::size_t>(bnode)];
                return w.coef(J, zbuf);
            },
            out.coef[c]);
    }
    return out;
}

double axis_fiber_holomorphy_defect(const SmoothForm& w, const ProductGrid& g, int axis,
                                    int m_b) {
    check_form(w, g, "axis_fiber_holomorphy_defect");
    if (axis < 0 || axis >= w.n)
        throw std::invalid_argument("axis_fiber_holomorphy_defect: bad axis");

    const FactorGrid& fe = g.factor[axis];
    if (m_b <= 0) m_b = default_mb(fe);
    const BoundaryCurve outer = boundary_nodes(fe.dom, m_b);
    const BoundaryCurve inset = boundary_nodes(fe.dom.scaled(0.8), 256);
    const PlanarDomain targets = fe.dom.scaled(0.55);

    const int n = g.n();
    const std::size_t fsz = fe.size();
    const std::size_t str = g.stride[axis];
    const std::size_t fibers = g.total / fsz;
    const std::size_t fiber_step = std::max<std::size_t>(1, fibers / 8);

    const unsigned bit = 1u << axis;
    double defect = 0.0;
    std::vector<cplx> z(static_cast<std::size_t>(n));
    std::vector<cplx> fvals(outer.node.size()), ivals(inset.node.size());

    for (unsigned J : increasing_subsets(w.n, w.q)) {
        if (J & bit) continue;
        for (std::size_t fb = 0; fb < fibers; fb += fiber_step) {
            const std::size_t outerix = fb / str, inner = fb % str;
            const std::size_t base = outerix * str * fsz + inner;
            for (int j = 0; j < n; ++j) z[j] = g.coord(base, j);

            for (std::size_t i = 0; i < outer.node.size(); ++i) {
                z[axis] = outer.node[i];
                fvals[i] = w.coef(J, z);
            }
            auto transform = [&](cplx ze) {
                return cauchy_boundary_point(outer, fvals, 0, ze).value;
            };
            for (std::size_t i = 0; i < inset.node.size(); ++i)
                ivals[i] = transform(inset.node[i]);

            for (std::size_t i = 0; i < fsz; ++i) {
                const cplx ze = fe.node[i];
                if (!targets.contains(ze)) continue;
                const cplx direct = transform(ze);
                const cplx reproduced = cauchy_boundary_point(inset, ivals, 0, ze).value;
                defect = std::max(defect,
                                  std::abs(reproduced - direct) / (1.0 + std::abs(direct)));
            }
        }
    }
    return defect;
}

IdentityReport axis_identity_residual(const SmoothForm& w, const ProductGrid& g, int axis,
                                      int m_b) {
    check_form(w, g, "axis_identity_residual");
    if (axis < 0 || axis >= w.n)
        throw std::invalid_argument("axis_identity_residual: bad axis");

    const FactorGrid& fe = g.factor[axis];
    const BoundaryCurve curve = boundary_nodes(fe.dom, m_b > 0 ? m_b : default_mb(fe));
    FactorKernel kern;
    kern.build(fe, 0);

    const Form0q W = sample_form(w, g);
    Form0q acc = W;
    if (w.q >= 1) acc = axpy_form(cplx(-1.0, 0.0), dbar_numeric(axis_area_op(W, axis, kern)), acc);
    if (w.q < w.n) acc = axpy_form(cplx(-1.0, 0.0), axis_area_op(sample_dbar(w, g), axis, kern), acc);
    const Form0q R = axis_boundary_op(w, g, axis, curve, 0);
    acc = axpy_form(cplx(-1.0, 0.0), R, acc);

    const auto keep = interior_mask(g, 3.5);
    IdentityReport rep;
    rep.residual = sup_norm_masked(acc, keep);
    rep.scale = sup_norm_masked(W, keep);
    rep.r_sup = sup_norm(R);
    rep.r_in_lower_class = gamma_class(R, nullptr, axis, 1e-12 * std::max(1.0, rep.scale));
    return rep;
}

namespace {

// Shared assembly for the composite operators.  With one factor, or in top
// degree, the boundary factor never appears; with two factors in degree one
// the single boundary term and its derivative feed both chains.
struct ChainParts {
    Form0q W, S, T;
    Form0q DW, R1, dR1, IDW1;
    bool two_factor_deg1 = false;
};

ChainParts build_chain(const SmoothForm& w, const ProductGrid& g, int m_b) {
    check_form(w, g, "homotopy chain");
    const int n = g.n();
    if (n < 1 || n > 2)
        throw std::invalid_argument(
            "homotopy chain: boundary chains need derivatives off the grid; one or two factors only");
    if (w.q < 1) throw std::invalid_argument("homotopy chain: positive degree required");

    ChainParts parts;
    parts.W = sample_form(w, g);

    FactorKernel klast;
    klast.build(g.factor[n - 1], 0);

    if (w.q == n) {
        // dbar omega vanishes identically; the boundary factor is dropped
        // from every component, so only the last-axis area term survives.
        parts.S = axis_area_op(parts.W, n - 1, klast);
        parts.T = Form0q::zero(g, w.q);
        return parts;
    }

    // Two factors, degree one.
    parts.DW = sample_dbar(w, g);
    const BoundaryCurve curve =
        boundary_nodes(g.factor[1].dom, m_b > 0 ? m_b : default_mb(g.factor[1]));
    parts.R1 = axis_boundary_op(w, g, 1, curve, 0);
    if (!gamma_class(parts.R1, nullptr, 1, 1e-10 * std::max(1.0, sup_norm(parts.W))))
        throw std::logic_error("homotopy chain: boundary term escaped its class");

    FactorKernel k0;
    k0.build(g.factor[0], 0);
    parts.S = axpy_form(cplx(1.0, 0.0), axis_area_op(parts.R1, 0, k0),
                        axis_area_op(parts.W, 1, klast));
    parts.dR1 = dbar_numeric(parts.R1);
    parts.IDW1 = axis_area_op(parts.DW, 1, klast);
    parts.T = axpy_form(cplx(1.0, 0.0), axis_area_op(parts.dR1, 0, k0), parts.IDW1);
    parts.two_factor_deg1 = true;
    return parts;
}

} // namespace

Form0q homotopy_area_chain(const SmoothForm& w, const ProductGrid& g, int m_b) {
    return build_chain(w, g, m_b).S;
}

Form0q homotopy_error_chain(const SmoothForm& w, const ProductGrid& g, int m_b) {
    return build_chain(w, g, m_b).T;
}

HomotopyReport homotopy_residual(const SmoothForm& w, const ProductGrid& g, int m_b) {
    ChainParts parts = build_chain(w, g, m_b);
    Form0q acc = parts.W;
    acc = axpy_form(cplx(-1.0, 0.0), dbar_numeric(parts.S), acc);
    acc = axpy_form(cplx(-1.0, 0.0), parts.T, acc);

    const auto keep = interior_mask(g, 3.5);
    HomotopyReport rep;
    rep.residual = sup_norm_masked(acc, keep);
    rep.scale = sup_norm_masked(parts.W, keep);
    if (parts.two_factor_deg1) {
        Form0q rhs = parts.DW;
        rhs = axpy_form(cplx(-1.0, 0.0), dbar_numeric(parts.IDW1), rhs);
        const Form0q diff = axpy_form(cplx(-1.0, 0.0), rhs, parts.dR1);
        rep.substitution_defect = sup_norm_masked(diff, keep);
    }
    return rep;
}

} // namespace dolbeault
