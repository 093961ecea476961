#include "dolbeault/forms.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dolbeault/analysis.hpp"
#include "dolbeault/cauchy.hpp"
#include "dolbeault/parallel.hpp"

namespace dolbeault {

namespace {

cplx ipow(cplx z, int k) {
    if (k < 0) return 1.0 / ipow(z, -k);
    cplx r{1.0, 0.0}, b = z;
    for (unsigned e = static_cast<unsigned>(k); e; e >>= 1, b *= b)
        if (e & 1u) r *= b;
    return r;
}

void check_same_shape(const Form0q& x, const Form0q& y, const char* who) {
    if (x.grid != y.grid || x.q != y.q || x.mask != y.mask)
        throw std::invalid_argument(std::string(who) + ": incompatible forms");
}

} // namespace

std::vector<unsigned> increasing_subsets(int n, int q) {
    std::vector<unsigned> out;
    if (n < 0 || n > 20) throw std::invalid_argument("increasing_subsets: bad dimension");
    if (q < 0 || q > n) return out;
    for (unsigned m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == q) out.push_back(m);
    return out;
}

int insertion_sign(unsigned mask, int axis) {
    const unsigned below = mask & ((1u << axis) - 1u);
    return std::popcount(below) % 2 == 0 ? 1 : -1;
}

Form0q Form0q::zero(const ProductGrid& g, int degree) {
    if (degree < 0 || degree > g.n() + 1) throw std::invalid_argument("Form0q: bad degree");
    Form0q w;
    w.grid = &g;
    w.n = g.n();
    w.q = degree;
    w.mask = increasing_subsets(w.n, degree);
    w.coef.assign(w.mask.size(), std::vector<cplx>(g.total, cplx{}));
    return w;
}

int Form0q::find(unsigned m) const {
    for (std::size_t c = 0; c < mask.size(); ++c)
        if (mask[c] == m) return static_cast<int>(c);
    return -1;
}

std::vector<cplx>& Form0q::operator[](unsigned m) {
    const int c = find(m);
    if (c < 0) throw std::out_of_range("Form0q: no such component");
    return coef[static_cast<std::size_t>(c)];
}

const std::vector<cplx>& Form0q::operator[](unsigned m) const {
    const int c = find(m);
    if (c < 0) throw std::out_of_range("Form0q: no such component");
    return coef[static_cast<std::size_t>(c)];
}

Form0q scaled_form(cplx a, const Form0q& x) {
    Form0q out = x;
    for (auto& comp : out.coef)
        parallel_for(comp.size(), [&](std::size_t t) { comp[t] *= a; });
    return out;
}

Form0q axpy_form(cplx a, const Form0q& x, const Form0q& y) {
    check_same_shape(x, y, "axpy_form");
    Form0q out = y;
    for (std::size_t c = 0; c < out.coef.size(); ++c) {
        auto& oc = out.coef[c];
        const auto& xc = x.coef[c];
        parallel_for(oc.size(), [&](std::size_t t) { oc[t] += a * xc[t]; });
    }
    return out;
}

double sup_norm(const Form0q& w) {
    double m = 0.0;
    for (const auto& comp : w.coef)
        for (const cplx& v : comp) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm_masked(const Form0q& w, std::span<const unsigned char> keep) {
    double m = 0.0;
    for (const auto& comp : w.coef) {
        if (comp.size() != keep.size())
            throw std::invalid_argument("sup_norm_masked: mask size mismatch");
        for (std::size_t t = 0; t < comp.size(); ++t)
            if (keep[t]) m = std::max(m, std::abs(comp[t]));
    }
    return m;
}

std::pair<Form0q, Form0q> split_axis(const Form0q& w, int axis) {
    if (axis < 0 || axis >= w.n) throw std::invalid_argument("split_axis: bad axis");
    Form0q with = w, without = w;
    for (std::size_t c = 0; c < w.mask.size(); ++c) {
        auto& drop = (w.mask[c] & (1u << axis)) ? without.coef[c] : with.coef[c];
        std::fill(drop.begin(), drop.end(), cplx{});
    }
    return {with, without};
}

bool gamma_class(const Form0q& w, const Form0q* dbar, int upto, double tol) {
    if (upto < 0 || upto > w.n) throw std::invalid_argument("gamma_class: bad axis count");
    const unsigned allowed = (1u << upto) - 1u;
    auto confined = [&](const Form0q& f) {
        for (std::size_t c = 0; c < f.mask.size(); ++c) {
            if ((f.mask[c] & ~allowed) == 0) continue;
            double m = 0.0;
            for (const cplx& v : f.coef[c]) m = std::max(m, std::abs(v));
            if (m > tol) return false;
        }
        return true;
    };
    return confined(w) && (dbar == nullptr || confined(*dbar));
}

namespace {

// Fourth-order first derivative on one line of samples.  `at` resolves an
// integer position to a value; polar radial lines resolve i < 0 through the
// antipodal column, so only the outer edge is one-sided.
template <typename At>
cplx d5_interior(const At& at, int i, double h) {
    return (at(i - 2) - 8.0 * at(i - 1) + 8.0 * at(i + 1) - at(i + 2)) / (12.0 * h);
}
template <typename At>
cplx d5_left(const At& at, int i, double h) {  // i = 0 or 1, samples to the right
    if (i == 0)
        return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
    return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
}
template <typename At>
cplx d5_right(const At& at, int i, int m, double h) {  // i = m-2 or m-1
    if (i == m - 1)
        return (25.0 * at(m - 1) - 48.0 * at(m - 2) + 36.0 * at(m - 3) - 16.0 * at(m - 4) +
                3.0 * at(m - 5)) / (12.0 * h);
    return (3.0 * at(m - 1) + 10.0 * at(m - 2) - 18.0 * at(m - 3) + 6.0 * at(m - 4) - at(m - 5)) /
           (12.0 * h);
}

void polar_fiber_dbar(const FactorGrid& f, const cplx* u, cplx* v, std::size_t str) {
    const int nr = f.n1, nt = f.n2;
    const double dr = f.dom.radius / nr;
    const double dt = 2.0 * std::numbers::pi / nt;
    for (int i = 0; i < nr; ++i) {
        for (int j = 0; j < nt; ++j) {
            auto rad = [&](int ii) {
                int jj = j;
                if (ii < 0) {
                    ii = -1 - ii;
                    jj = (j + nt / 2) % nt;
                }
                return u[(static_cast<std::size_t>(ii) * nt + jj) * str];
            };
            auto ang = [&](int jj) {
                jj %= nt;
                if (jj < 0) jj += nt;
                return u[(static_cast<std::size_t>(i) * nt + jj) * str];
            };
            const cplx fr = i <= nr - 3 ? d5_interior(rad, i, dr) : d5_right(rad, i, nr, dr);
            const cplx ft = d5_interior(ang, j, dt);
            const double rc = (i + 0.5) * dr, tc = (j + 0.5) * dt;
            v[(static_cast<std::size_t>(i) * nt + j) * str] =
                0.5 * std::polar(1.0, tc) * (fr + cplx(0.0, 1.0) / rc * ft);
        }
    }
}

void rect_fiber_dbar(const FactorGrid& f, const cplx* u, cplx* v, std::size_t str) {
    const int ny = f.n1, nx = f.n2;
    const double dx = f.g1[0] - f.g0[0], dy = f.g3[0] - f.g2[0];
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            auto xs = [&](int ii) {
                return u[(static_cast<std::size_t>(iy) * nx + ii) * str];
            };
            auto ys = [&](int ii) {
                return u[(static_cast<std::size_t>(ii) * nx + ix) * str];
            };
            cplx fx = ix < 2            ? d5_left(xs, ix, dx)
                      : ix <= nx - 3    ? d5_interior(xs, ix, dx)
                                        : d5_right(xs, ix, nx, dx);
            cplx fy = iy < 2            ? d5_left(ys, iy, dy)
                      : iy <= ny - 3    ? d5_interior(ys, iy, dy)
                                        : d5_right(ys, iy, ny, dy);
            v[(static_cast<std::size_t>(iy) * nx + ix) * str] = 0.5 * (fx + cplx(0.0, 1.0) * fy);
        }
    }
}

} // namespace

void fiber_dbar(const FactorGrid& f, const cplx* in, cplx* out, std::size_t stride) {
    if (f.polar ? (f.n1 < 5 || f.n2 < 6) : (f.n1 < 5 || f.n2 < 5))
        throw std::invalid_argument("fiber_dbar: grid too coarse for the stencil");
    if (f.polar)
        polar_fiber_dbar(f, in, out, stride);
    else
        rect_fiber_dbar(f, in, out, stride);
}

void axis_dbar_field(const ProductGrid& g, int axis, std::span<const cplx> in,
                     std::span<cplx> out) {
    if (axis < 0 || axis >= g.n()) throw std::invalid_argument("axis_dbar_field: bad axis");
    if (in.size() != g.total || out.size() != g.total)
        throw std::invalid_argument("axis_dbar_field: field size mismatch");
    const FactorGrid& f = g.factor[axis];
    if (f.polar ? (f.n1 < 5 || f.n2 < 6) : (f.n1 < 5 || f.n2 < 5))
        throw std::invalid_argument("axis_dbar_field: grid too coarse for the stencil");

    const std::size_t str = g.stride[axis];
    const std::size_t fsz = f.size();
    const std::size_t fibers = g.total / fsz;
    parallel_for(fibers, [&](std::size_t fb) {
        const std::size_t outer = fb / str;
        const std::size_t inner = fb % str;
        const std::size_t base = outer * str * fsz + inner;
        if (f.polar)
            polar_fiber_dbar(f, in.data() + base, out.data() + base, str);
        else
            rect_fiber_dbar(f, in.data() + base, out.data() + base, str);
    });
}

Form0q dbar_numeric(const Form0q& w) {
    if (w.grid == nullptr) throw std::invalid_argument("dbar_numeric: unbound form");
    const ProductGrid& g = *w.grid;
    Form0q out = Form0q::zero(g, w.q + 1);
    if (w.q >= w.n) return out;  // top degree, nothing to produce
    std::vector<cplx> d(g.total);
    for (std::size_t c = 0; c < w.mask.size(); ++c) {
        for (int a = 0; a < w.n; ++a) {
            if (w.mask[c] & (1u << a)) continue;
            axis_dbar_field(g, a, w.coef[c], d);
            auto& oc = out[w.mask[c] | (1u << a)];
            const double sg = insertion_sign(w.mask[c], a);
            parallel_for(g.total, [&](std::size_t t) { oc[t] += sg * d[t]; });
        }
    }
    return out;
}

std::vector<cplx> monomial_field(const ProductGrid& g, std::span<const int> k) {
    if (static_cast<int>(k.size()) != g.n())
        throw std::invalid_argument("monomial_field: one exponent per factor");
    std::vector<cplx> out(g.total);
    parallel_for(g.total, [&](std::size_t t) {
        cplx v{1.0, 0.0};
        for (int j = 0; j < g.n(); ++j)
            if (k[j] != 0) v *= ipow(g.coord(t, j), k[j]);
        out[t] = v;
    });
    return out;
}

Form0q dbar_weighted(const Form0q& w, std::span<const int> k) {
    if (w.grid == nullptr) throw std::invalid_argument("dbar_weighted: unbound form");
    if (static_cast<int>(k.size()) != w.n)
        throw std::invalid_argument("dbar_weighted: one weight per factor");
    const ProductGrid& g = *w.grid;
    std::vector<int> neg(k.begin(), k.end());
    for (int& kk : neg) kk = -kk;
    const auto zmk = monomial_field(g, neg);
    const auto zk = monomial_field(g, k);

    Form0q tmp = w;
    for (auto& comp : tmp.coef)
        parallel_for(g.total, [&](std::size_t t) { comp[t] *= zmk[t]; });
    Form0q out = dbar_numeric(tmp);
    for (auto& comp : out.coef)
        parallel_for(g.total, [&](std::size_t t) { comp[t] *= zk[t]; });
    return out;
}

Form0q wedge_dbar_axis(int axis, std::span<const cplx> gfield, const Form0q& w) {
    if (w.grid == nullptr) throw std::invalid_argument("wedge_dbar_axis: unbound form");
    if (axis < 0 || axis >= w.n) throw std::invalid_argument("wedge_dbar_axis: bad axis");
    const ProductGrid& g = *w.grid;
    if (gfield.size() != g.total) throw std::invalid_argument("wedge_dbar_axis: field size mismatch");
    Form0q out = Form0q::zero(g, w.q + 1);
    if (w.q >= w.n) return out;
    for (std::size_t c = 0; c < w.mask.size(); ++c) {
        if (w.mask[c] & (1u << axis)) continue;
        auto& oc = out[w.mask[c] | (1u << axis)];
        const auto& wc = w.coef[c];
        const double sg = insertion_sign(w.mask[c], axis);
        parallel_for(g.total, [&](std::size_t t) { oc[t] += sg * gfield[t] * wc[t]; });
    }
    return out;
}

namespace {

// Distrust zone around the divisor: nodes within `rings` radial spacings of
// the origin on origin-centered polar factors.  Finite differences and the
// frozen-coefficient quadrature are both uncontrolled there for the singular
// inputs the membership test must tolerate.
std::vector<unsigned char> divisor_mask(const ProductGrid& g, double rings) {
    std::vector<unsigned char> keep(g.total, 1);
    for (int j = 0; j < g.n(); ++j) {
        const FactorGrid& f = g.factor[j];
        if (!f.polar || std::abs(f.dom.center) > 1e-14 * f.dom.radius) continue;
        const double cut = rings * f.dom.radius / f.n1;
        parallel_for(g.total, [&](std::size_t t) {
            if (std::abs(g.coord(t, j)) < cut) keep[t] = 0;
        });
    }
    return keep;
}

} // namespace

MembershipReport kernel_membership_q0(
    const std::function<cplx(std::span<const cplx>)>& f, const ProductGrid& g,
    const pexp& p, std::span<const rat> s) {
    if (!f) throw std::invalid_argument("kernel_membership_q0: empty function");
    const int n = g.n();
    if (static_cast<int>(s.size()) != n)
        throw std::invalid_argument("kernel_membership_q0: one exponent per factor");

    const std::vector<rat> sv(s.begin(), s.end());
    const std::vector<int> k = dbar_weight(p, sv);

    MembershipReport rep;
    const auto field = sample_scalar(f, g);

    // Trusted node set: away from the factor boundaries and outside the
    // divisor zone, where neither the stencil nor the boundary transform is
    // reliable for the singular witnesses.
    auto keep = interior_mask(g, 2.5);
    const auto div = divisor_mask(g, 8.0);
    for (std::size_t t = 0; t < g.total; ++t) keep[t] = keep[t] && div[t];

    // Closedness precondition, measured locally: |dbar_k f| h / |f| stays
    // small for any closed input, singular ones included, while a non-closed
    // field scores O(h / |z|) which never drops below 1/8 on the kept nodes.
    Form0q w0 = Form0q::zero(g, 0);
    w0.coef[0] = field;
    const Form0q dk = dbar_weighted(w0, k);
    double worst = 0.0;
    for (std::size_t t = 0; t < g.total; ++t) {
        if (!keep[t]) continue;
        double h = 0.0;
        std::size_t rem = t;
        for (int j = 0; j < n; ++j) {
            const std::size_t idx = rem / g.stride[j];
            rem -= idx * g.stride[j];
            h = std::max(h, g.factor[j].hloc[idx]);
        }
        double mag = 0.0;
        for (const auto& comp : dk.coef) mag = std::max(mag, std::abs(comp[t]));
        worst = std::max(worst, mag * h / (std::abs(field[t]) + 1e-300));
    }
    rep.dbar_residual = worst;
    if (worst > 1e-2)
        throw std::invalid_argument("kernel_membership_q0: input is not closed for the weighted dbar");

    // Discrete holomorphy of zeta^{-k} f along every axis: the boundary
    // transform must reproduce it at trusted nodes.  Other-axis weights are
    // constant along the fiber and cancel in the comparison, so only the
    // active axis carries its weight.
    for (int e = 0; e < n; ++e) {
        const FactorGrid& fe = g.factor[e];
        const BoundaryCurve curve = boundary_nodes(fe.dom, std::max(512, 4 * fe.n2));
        std::vector<cplx> rep_e(g.total);
        const int ke = k[e];
        axis_boundary_apply(
            g, e, curve, 0,
            [&](std::size_t fiber_base, int bnode) {
                thread_local std::vector<cplx> zbuf;
                zbuf.resize(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j) zbuf[j] = g.coord(fiber_base, j);
                zbuf[e] = curve.node[static_cast<std::size_t>(bnode)];
                return f(zbuf) * ipow(zbuf[e], -ke);
            },
            rep_e);
        double defect = 0.0;
        for (std::size_t t = 0; t < g.total; ++t) {
            if (!keep[t]) continue;
            const cplx ge = field[t] * ipow(g.coord(t, e), -ke);
            defect = std::max(defect, std::abs(rep_e[t] - ge) / (1.0 + std::abs(ge)));
        }
        rep.holo_defect = std::max(rep.holo_defect, defect);
    }

    // Weighted norm, stable under one refinement.
    rep.norm_coarse = weighted_lp_norm(field, g, p, sv);
    const ProductGrid fine = refine_product(g, 2.0);
    rep.norm_fine = weighted_lp_norm(sample_scalar(f, fine), fine, p, sv);
    rep.norm_stable = std::isfinite(rep.norm_coarse) && std::isfinite(rep.norm_fine) &&
                      rep.norm_fine <= 1.25 * rep.norm_coarse + 1e-12;

    rep.member = rep.holo_defect <= 1e-3 && rep.norm_stable;
    return rep;
}

} // namespace dolbeault
