#include "dolbeault/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "dolbeault/analysis.hpp"
#include "dolbeault/parallel.hpp"

namespace dolbeault {

namespace {

// exp(-1/t) smoothstep: 0 for u <= 0, 1 for u >= 1, C-infinity across the
// junctions with exact zeros of every derivative there.
double sstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double dsstep(double u) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    const double da = a / (u * u), db = b / ((1.0 - u) * (1.0 - u));
    return (da * b + a * db) / ((a + b) * (a + b));
}

// Rising ramp on [lo0, lo1] times falling ramp on [hi0, hi1]; used per edge
// pair by the rectangle cutoff.
double edge_profile(double x, double lo0, double lo1, double hi0, double hi1) {
    return sstep((x - lo0) / (lo1 - lo0)) * sstep((hi1 - x) / (hi1 - hi0));
}

double edge_profile_d(double x, double lo0, double lo1, double hi0, double hi1) {
    const double u = (x - lo0) / (lo1 - lo0), v = (hi1 - x) / (hi1 - hi0);
    return dsstep(u) / (lo1 - lo0) * sstep(v) - sstep(u) * dsstep(v) / (hi1 - hi0);
}

std::vector<unsigned char> mask_and(std::vector<unsigned char> a,
                                    std::span<const unsigned char> b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
    return a;
}

// Nodes at least `cells` node spacings away from z_axis = 0 on every axis
// carrying a nonzero weight.  The weighted derivative conjugates by a
// monomial that is smooth only off the divisor, so stencil checks of it are
// confined to this mask.  The conjugated stencil truncation grows like
// h^4 / r^5, so checks that must reach stencil accuracy also pass
// `floor_frac` to hold the standoff at a fixed fraction of the factor
// diameter instead of letting it shrink with the grid.
std::vector<unsigned char> off_divisor_mask(const ProductGrid& g, std::span<const int> w,
                                            double cells, double floor_frac = 0.0) {
    std::vector<unsigned char> keep(g.total, 1);
    for (int a = 0; a < g.n(); ++a) {
        if (w[static_cast<std::size_t>(a)] == 0) continue;
        const FactorGrid& f = g.factor[static_cast<std::size_t>(a)];
        const double lim = std::max(cells * f.spacing(), floor_frac * f.dom.diameter());
        for (std::size_t i = 0; i < g.total; ++i)
            if (std::abs(g.coord(i, a)) < lim) keep[i] = 0;
    }
    return keep;
}

// Per-axis node values spread over the product grid.
std::vector<cplx> broadcast(const ProductGrid& g, int axis, std::span<const cplx> v) {
    std::vector<cplx> out(g.total);
    const std::size_t st = g.stride[static_cast<std::size_t>(axis)];
    const std::size_t m = g.factor[static_cast<std::size_t>(axis)].size();
    parallel_for(g.total, [&](std::size_t i) { out[i] = v[(i / st) % m]; });
    return out;
}

Form0q hadamard(const Form0q& w, std::span<const cplx> field) {
    Form0q out = w;
    for (auto& comp : out.coef)
        parallel_for(comp.size(), [&](std::size_t i) { comp[i] *= field[i]; });
    return out;
}

bool is_zero_form(const Form0q& w) {
    for (const auto& comp : w.coef)
        for (cplx v : comp)
            if (v != cplx{0.0, 0.0}) return false;
    return true;
}

// Component pattern of the descent: everything still alive must use only
// axes 0..upto-1.  The transforms produce the pattern structurally, so any
// escape is an internal sign or ordering bug, not an input problem.
void assert_confined(const Form0q& w, int upto, double scale, const char* what) {
    for (std::size_t c = 0; c < w.mask.size(); ++c) {
        if (w.mask[c] < (1u << upto)) continue;
        for (cplx v : w.coef[c])
            if (std::abs(v) > 1e-12 * std::max(1.0, scale))
                throw std::logic_error(std::string("solve_dbar: ") + what +
                                       " escaped its component class");
    }
}

double unweighted_mass(const Form0q& w, std::span<const unsigned char> keep, bool outside) {
    const ProductGrid& g = *w.grid;
    double total = 0;
    for (const auto& comp : w.coef) {
        std::vector<double> cell(g.total, 0.0);
        parallel_for(g.total, [&](std::size_t i) {
            if (keep[i] ? outside : !outside) return;
            double a = 1.0;
            for (int j = 0; j < g.n(); ++j) {
                const std::size_t st = g.stride[static_cast<std::size_t>(j)];
                const std::size_t m = g.factor[static_cast<std::size_t>(j)].size();
                a *= g.factor[static_cast<std::size_t>(j)].area[(i / st) % m];
            }
            cell[i] = a * std::abs(comp[i]);
        });
        total += det_sum(cell);
    }
    return total;
}

} // namespace

double AxisCutoff::value(cplx z) const {
    if (plateau.shape == PlanarDomain::Shape::disc) {
        const double r = std::abs(z - plateau.center);
        return sstep((support.radius - r) / (support.radius - plateau.radius));
    }
    return edge_profile(z.real(), support.lo.real(), plateau.lo.real(), plateau.hi.real(),
                        support.hi.real()) *
           edge_profile(z.imag(), support.lo.imag(), plateau.lo.imag(), plateau.hi.imag(),
                        support.hi.imag());
}

cplx AxisCutoff::dbar(cplx z) const {
    if (plateau.shape == PlanarDomain::Shape::disc) {
        const double r = std::abs(z - plateau.center);
        if (r <= plateau.radius || r >= support.radius) return cplx{0.0, 0.0};
        const double dr = -dsstep((support.radius - r) / (support.radius - plateau.radius)) /
                          (support.radius - plateau.radius);
        return dr * (z - plateau.center) / (2.0 * r);
    }
    const double x = z.real(), y = z.imag();
    const double X = edge_profile(x, support.lo.real(), plateau.lo.real(), plateau.hi.real(),
                                  support.hi.real());
    const double Y = edge_profile(y, support.lo.imag(), plateau.lo.imag(), plateau.hi.imag(),
                                  support.hi.imag());
    const double Xp = edge_profile_d(x, support.lo.real(), plateau.lo.real(), plateau.hi.real(),
                                     support.hi.real());
    const double Yp = edge_profile_d(y, support.lo.imag(), plateau.lo.imag(), plateau.hi.imag(),
                                     support.hi.imag());
    return 0.5 * cplx(Xp * Y, X * Yp);
}

CutoffFamily make_cutoffs(const ProductGrid& grid, const std::vector<PlanarDomain>& inner,
                          double plateau_margin, double support_margin) {
    if (inner.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("make_cutoffs: one inner region per factor required");
    if (plateau_margin <= 0.0 || support_margin <= 0.0)
        throw std::invalid_argument("make_cutoffs: margins must be positive");
    CutoffFamily fam;
    fam.axis.resize(inner.size());
    for (std::size_t j = 0; j < inner.size(); ++j) {
        const FactorGrid& f = grid.factor[j];
        const PlanarDomain& G = inner[j];
        AxisCutoff& cut = fam.axis[j];
        if (G.shape != f.dom.shape)
            throw std::invalid_argument("make_cutoffs: factor and inner region shapes differ");
        if (G.shape == PlanarDomain::Shape::disc) {
            const double a = G.radius + plateau_margin;
            const double b =
                f.dom.radius - support_margin - std::abs(G.center - f.dom.center);
            if (!(a < b))
                throw std::invalid_argument("make_cutoffs: margins leave no transition band");
            cut.plateau = PlanarDomain::disc(G.center, a);
            cut.support = PlanarDomain::disc(G.center, b);
        } else {
            const cplx pm{plateau_margin, plateau_margin}, sm{support_margin, support_margin};
            const cplx plo = G.lo - pm, phi = G.hi + pm;
            const cplx slo = f.dom.lo + sm, shi = f.dom.hi - sm;
            if (!(slo.real() < plo.real() && phi.real() < shi.real() &&
                  slo.imag() < plo.imag() && phi.imag() < shi.imag()))
                throw std::invalid_argument("make_cutoffs: margins leave no transition band");
            cut.plateau = PlanarDomain::rectangle(plo, phi);
            cut.support = PlanarDomain::rectangle(slo, shi);
        }
        cut.chi.resize(f.size());
        cut.dchi.resize(f.size());
        std::vector<double> mass(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            cut.chi[i] = cut.value(f.node[i]);
            cut.dchi[i] = cut.dbar(f.node[i]);
            mass[i] = f.area[i] * std::abs(cut.dchi[i]);
        }
        cut.band_mass = det_sum(mass);
    }
    return fam;
}

std::vector<unsigned char> product_region_mask(const ProductGrid& grid,
                                               const std::vector<PlanarDomain>& region) {
    if (region.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("product_region_mask: one region per factor required");
    std::vector<unsigned char> keep(grid.total, 1);
    for (std::size_t i = 0; i < grid.total; ++i)
        for (int a = 0; a < grid.n(); ++a)
            if (!region[static_cast<std::size_t>(a)].contains(grid.coord(i, a))) {
                keep[i] = 0;
                break;
            }
    return keep;
}

double grid_differentiation_error(const ProductGrid& grid) {
    const auto keep = interior_mask(grid, 3.5);
    double worst = 0;
    std::vector<cplx> f(grid.total), d(grid.total);
    for (int a = 0; a < grid.n(); ++a) {
        for (std::size_t i = 0; i < grid.total; ++i) f[i] = std::exp(std::conj(grid.coord(i, a)));
        axis_dbar_field(grid, a, f, d);
        for (std::size_t i = 0; i < grid.total; ++i)
            if (keep[i]) worst = std::max(worst, std::abs(d[i] - f[i]));
    }
    return worst;
}

SupportIdentityReport support_identity_residual(const SmoothForm& w, const ProductGrid& grid,
                                                int axis, std::span<const int> m) {
    if (axis < 0 || axis >= grid.n())
        throw std::invalid_argument("support_identity_residual: bad axis");
    if (m.size() != static_cast<std::size_t>(grid.n()))
        throw std::invalid_argument("support_identity_residual: one weight per axis required");

    FactorKernel kern;
    kern.build(grid.factor[static_cast<std::size_t>(axis)], m[static_cast<std::size_t>(axis)]);
    const Form0q w0 = sample_form(w, grid);
    const Form0q dw = sample_dbar(w, grid);
    const Form0q back = dbar_weighted(axis_area_op(w0, axis, kern), m);
    const Form0q thru = axis_area_op(dw, axis, kern);

    const auto keep =
        mask_and(interior_mask(grid, 3.5), off_divisor_mask(grid, m, 3.5, 0.05));
    Form0q defect = axpy_form(cplx(-1.0, 0.0), back, w0);
    defect = axpy_form(cplx(-1.0, 0.0), thru, defect);
    SupportIdentityReport rep;
    rep.residual = sup_norm_masked(defect, keep);
    rep.scale = sup_norm_masked(w0, keep);
    return rep;
}

double form_weighted_norm(const Form0q& w, const pexp& p, std::span<const rat> s) {
    double worst = 0;
    for (const auto& comp : w.coef)
        worst = std::max(worst, weighted_lp_norm(comp, *w.grid, p, s));
    return worst;
}

namespace {

std::vector<int> transform_weights(const SolveConfig& cfg) {
    return cfg.mode == WeightMode::full ? dbar_weight(cfg.p, cfg.s)
                                        : modified_dbar_weight(cfg.p, cfg.s);
}

// Target-space norms can put an exactly divergent mass on cells touching the
// divisor (sigma = p*s >= 2) even when the field vanishes there fast enough
// for the continuum integral to be finite; the frozen-sample rule cannot see
// vanishing inside a cell, so those cells are dropped.  Refinement shrinks
// the dropped zone, and a field that failed to vanish would still blow up
// the retained rings next to it, so drift checks keep their teeth.
double divisor_truncated_norm(const Form0q& w, const pexp& p, std::span<const rat> s) {
    if (p.inf) return form_weighted_norm(w, p, s);
    const ProductGrid& g = *w.grid;
    std::vector<unsigned char> keep(g.total, 1);
    bool any = false;
    for (int j = 0; j < g.n(); ++j) {
        if (s[static_cast<std::size_t>(j)] * p.p < rat(2)) continue;
        const FactorGrid& f = g.factor[static_cast<std::size_t>(j)];
        for (std::size_t i = 0; i < g.total; ++i) {
            const auto idx = static_cast<int>((i / g.stride[static_cast<std::size_t>(j)]) %
                                              f.size());
            if (f.innermost(idx)) {
                keep[i] = 0;
                any = true;
            }
        }
    }
    if (!any) return form_weighted_norm(w, p, s);
    Form0q t = w;
    for (auto& comp : t.coef)
        for (std::size_t i = 0; i < g.total; ++i)
            if (!keep[i]) comp[i] = cplx{0.0, 0.0};
    return form_weighted_norm(t, p, s);
}

std::vector<rat> target_weights(const SolveConfig& cfg) {
    std::vector<rat> sp = cfg.s;
    if (cfg.mode == WeightMode::full) sp.back() = sp.back() + rat(1) - cfg.eps;
    return sp;
}

} // namespace

SolveResult solve_dbar(const Form0q& omega, const std::vector<PlanarDomain>& inner,
                       const SolveConfig& cfg) {
    if (omega.grid == nullptr) throw std::invalid_argument("solve_dbar: unbound form");
    const ProductGrid& g = *omega.grid;
    const int n = g.n();
    if (omega.q < 1 || omega.q > n)
        throw std::invalid_argument("solve_dbar: degree must lie in [1, n]");
    if (cfg.s.size() != static_cast<std::size_t>(n))
        throw std::invalid_argument("solve_dbar: one weight exponent per axis required");
    if (cfg.mode == WeightMode::full && !(rat(0) < cfg.eps && cfg.eps < rat(1)))
        throw std::invalid_argument("solve_dbar: eps must lie in (0, 1)");

    SolveResult r;
    r.trace.c = transform_weights(cfg);
    r.trace.s_plus = target_weights(cfg);
    r.trace.cutoffs = make_cutoffs(g, inner, cfg.plateau_margin, cfg.support_margin);

    // The construction assumes a dbar_c-closed input; measure the defect
    // against what the stencils themselves achieve on a smooth field.
    {
        const Form0q d0 = dbar_weighted(omega, r.trace.c);
        const auto keep =
            mask_and(interior_mask(g, 3.5), off_divisor_mask(g, r.trace.c, 3.5));
        const double defect = sup_norm_masked(d0, keep);
        const double tol =
            10.0 * grid_differentiation_error(g) * std::max(1.0, sup_norm_masked(omega, keep));
        if (defect > tol)
            throw std::invalid_argument("solve_dbar: input is not closed to grid accuracy");
    }

    const double scale = sup_norm(omega);
    Form0q om = omega;                              // omega^j entering each stage
    Form0q dom = Form0q::zero(g, omega.q + 1);      // its recursion dbar field
    for (int a = n - 1; a >= omega.q - 1; --a) {
        FactorKernel kern;
        kern.build(g.factor[static_cast<std::size_t>(a)],
                   r.trace.c[static_cast<std::size_t>(a)]);
        const AxisCutoff& cut = r.trace.cutoffs.axis[static_cast<std::size_t>(a)];
        std::vector<cplx> chi(cut.chi.size());
        for (std::size_t i = 0; i < chi.size(); ++i) chi[i] = cut.chi[i];
        const std::vector<cplx> chi_f = broadcast(g, a, chi);
        const std::vector<cplx> dchi_f = broadcast(g, a, cut.dchi);

        SolveStage stage;
        stage.axis = a;
        stage.omega = om;
        stage.dbar_omega = dom;
        stage.eta = axis_area_op(hadamard(om, chi_f), a, kern);
        stage.theta = is_zero_form(dom) ? Form0q::zero(g, om.q)
                                        : axis_area_op(hadamard(dom, chi_f), a, kern);

        const Form0q wom = wedge_dbar_axis(a, dchi_f, om);
        Form0q om_next = is_zero_form(wom) ? Form0q::zero(g, om.q)
                                           : axis_area_op(wom, a, kern);
        Form0q dom_next = wom;
        if (!is_zero_form(dom)) {
            const Form0q wd = wedge_dbar_axis(a, dchi_f, dom);
            if (!is_zero_form(wd))
                dom_next = axpy_form(cplx(-1.0, 0.0), axis_area_op(wd, a, kern), wom);
        }
        assert_confined(om_next, a, scale, "descent form");

        r.trace.stage.push_back(std::move(stage));
        om = std::move(om_next);
        dom = std::move(dom_next);
    }

    r.eta = Form0q::zero(g, omega.q - 1);
    for (const SolveStage& st : r.trace.stage)
        r.eta = axpy_form(cplx(1.0, 0.0), st.eta, r.eta);
    return r;
}

SolveReport verify_solution(const SolveResult& r, const Form0q& omega,
                            const std::vector<PlanarDomain>& inner, const SolveConfig& cfg) {
    const ProductGrid& g = *omega.grid;
    SolveReport rep;
    const std::vector<int>& c = r.trace.c;
    const std::vector<int> kt = modified_dbar_weight(cfg.p, cfg.s);

    const auto inner_keep =
        mask_and(product_region_mask(g, inner), off_divisor_mask(g, c, 3.5));
    const Form0q dc = dbar_weighted(r.eta, c);
    rep.residual_inner = sup_norm_masked(axpy_form(cplx(-1.0, 0.0), dc, omega), inner_keep);
    rep.scale = sup_norm_masked(omega, inner_keep);

    rep.eta_norm = divisor_truncated_norm(r.eta, cfg.p, r.trace.s_plus);
    rep.omega_norm = divisor_truncated_norm(omega, cfg.p, cfg.s);
    rep.ratio = rep.omega_norm > 0 ? rep.eta_norm / rep.omega_norm : 0.0;

    // Both weighted derivatives see the same eta off the divisor.
    {
        std::vector<int> wmax = c;
        for (std::size_t j = 0; j < wmax.size(); ++j)
            if (wmax[j] == 0) wmax[j] = kt[j];
        const auto keep =
            mask_and(interior_mask(g, 3.5), off_divisor_mask(g, wmax, 3.5, 0.05));
        const Form0q dt = dbar_weighted(r.eta, kt);
        rep.mode_agreement = sup_norm_masked(axpy_form(cplx(-1.0, 0.0), dt, dc), keep);
    }

    // Trace bookkeeping: recursion field vs differenced derivative, cutoff
    // remainder confinement, and descent support.
    const auto chain_keep = mask_and(interior_mask(g, 3.5), off_divisor_mask(g, c, 3.5));
    const auto region_keep = product_region_mask(g, inner);
    for (std::size_t si = 0; si < r.trace.stage.size(); ++si) {
        const SolveStage& st = r.trace.stage[si];
        const Form0q dn = dbar_weighted(st.omega, c);
        rep.chain_law = std::max(
            rep.chain_law,
            sup_norm_masked(axpy_form(cplx(-1.0, 0.0), dn, st.dbar_omega), chain_keep));
        rep.theta_inner = std::max(rep.theta_inner, sup_norm_masked(st.theta, region_keep));

        for (std::size_t cm = 0; cm < st.omega.mask.size(); ++cm)
            if (st.omega.mask[cm] >= (1u << (st.axis + 1)))
                for (cplx v : st.omega.coef[cm])
                    if (std::abs(v) > 1e-10 * (1.0 + rep.scale)) rep.class_ok = false;

        if (si == 0) continue;  // the input's dbar field is zero; nothing to confine
        // Band union over the axes already consumed (those above st.axis).
        std::vector<unsigned char> in_band(g.total, 0);
        for (std::size_t i = 0; i < g.total; ++i)
            for (int l = st.axis + 1; l < g.n(); ++l) {
                const AxisCutoff& cut = r.trace.cutoffs.axis[static_cast<std::size_t>(l)];
                const cplx zl = g.coord(i, l);
                // dchi vanishes exactly on the band edges, so open/closed
                // conventions bin only zero-valued nodes.
                if (!cut.plateau.contains(zl) && cut.support.contains(zl)) {
                    in_band[i] = 1;
                    break;
                }
            }
        const double out_mass = unweighted_mass(st.dbar_omega, in_band, true);
        const double tot = out_mass + unweighted_mass(st.dbar_omega, in_band, false);
        if (tot > 0) rep.support_leak = std::max(rep.support_leak, out_mass / tot);
    }
    return rep;
}

} // namespace dolbeault
