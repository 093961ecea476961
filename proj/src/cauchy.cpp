#include "dolbeault/cauchy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dolbeault/forms.hpp"
#include "dolbeault/parallel.hpp"

namespace dolbeault {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double tau = 2.0 * pi;
const cplx iu{0.0, 1.0};

cplx ipow(cplx z, int n) {
    if (n < 0) return 1.0 / ipow(z, -n);
    cplx r{1.0, 0.0}, b = z;
    for (unsigned m = static_cast<unsigned>(n); m; m >>= 1) {
        if (m & 1u) r *= b;
        b *= b;
    }
    return r;
}

// Contour pieces of Int (zetabar - zbar)/(zeta - z) dzeta; the cell kernel
// integral is their sum divided by 2i.

cplx straight_piece(cplx a, cplx b, cplx z) {
    cplx w0 = a - z, w1 = b - z, d = b - a;
    // z at an endpoint: the log coefficient vanishes identically, and the
    // integral is still absolutely convergent (the integrand has modulus 1).
    if (w0 == cplx{} || w1 == cplx{}) return std::conj(d);
    return std::conj(d) + (std::conj(w0) - std::conj(d) * w0 / d) * std::log(w1 / w0);
}

// Arc zeta = c0 + R e^{i theta}, theta from ta to tb (either direction).
// The principal log of the endpoint ratio is the continuous branch only when
// the swept argument stays below pi; bisect until R |dtheta| is at most half
// the endpoint distances, which bounds the sweep by one radian.
cplx arc_piece(cplx c0, double R, double ta, double tb, cplx z, int depth = 0) {
    cplx zp = z - c0;
    double azp = std::abs(zp);
    cplx ea = std::polar(1.0, ta), eb = std::polar(1.0, tb);
    if (azp <= 1e-6 * R) {
        cplx d1 = std::conj(eb) - std::conj(ea);
        cplx d2 = std::conj(eb * eb) - std::conj(ea * ea);
        return -R * d1 - 0.5 * zp * d2 - iu * std::conj(zp) * (tb - ta);
    }
    cplx va = R * ea - zp, vb = R * eb - zp;
    double span = R * std::abs(tb - ta);
    if (span > 0.5 * std::min(std::abs(va), std::abs(vb))) {
        if (depth > 48) throw std::runtime_error("arc_piece: target on the arc");
        double tm = 0.5 * (ta + tb);
        return arc_piece(c0, R, ta, tm, z, depth + 1) + arc_piece(c0, R, tm, tb, z, depth + 1);
    }
    cplx dlog = std::log(vb / va);
    double dth = tb - ta;
    return -iu * std::conj(zp) * dth + ((R * R - azp * azp) / zp) * (dlog - iu * dth);
}

// Contour pieces of Int (zetabar - zbar)^2 / (zeta - z) dzeta; the conjugate
// ratio cell integral is their sum divided by 4i.  The squared factor kills
// the pole, so no in-cell distributional term arises for any target.

cplx straight_piece2(cplx a, cplx b, cplx z) {
    cplx w0 = a - z, w1 = b - z, d = b - a;
    cplx al = std::conj(d) / d;
    cplx be = std::conj(w0) - al * w0;  // exactly 0 when z lies on the line
    cplx acc = 0.5 * al * al * (w1 * w1 - w0 * w0) + 2.0 * al * be * (w1 - w0);
    if (w0 != cplx{} && w1 != cplx{} && be != cplx{}) acc += be * be * std::log(w1 / w0);
    return acc;
}

cplx arc_piece2(cplx c0, double R, double ta, double tb, cplx z, int depth = 0) {
    cplx zp = z - c0;
    double azp = std::abs(zp);
    cplx ea = std::polar(1.0, ta), eb = std::polar(1.0, tb);
    double dth = tb - ta;
    if (azp <= 1e-4 * R) {
        // Series in zp/R; the closed form below cancels catastrophically here.
        cplx ia = std::conj(ea), ib = std::conj(eb);
        cplx acc = -0.5 * (R * R - 2.0 * azp * azp) * (ib * ib - ia * ia);
        acc -= (R * zp / 3.0) * (ib * ib * ib - ia * ia * ia);
        acc -= 0.25 * (zp * zp) * (ib * ib * ib * ib - ia * ia * ia * ia);
        acc += 2.0 * R * std::conj(zp) * (ib - ia);
        acc += std::conj(zp) * std::conj(zp) * iu * dth;
        return acc;
    }
    cplx va = R * ea - zp, vb = R * eb - zp;
    double span = R * std::abs(dth);
    if (span > 0.5 * std::min(std::abs(va), std::abs(vb))) {
        if (depth > 48) throw std::runtime_error("arc_piece2: target on the arc");
        double tm = 0.5 * (ta + tb);
        return arc_piece2(c0, R, ta, tm, z, depth + 1) + arc_piece2(c0, R, tm, tb, z, depth + 1);
    }
    cplx dlog = std::log(vb / va);
    cplx zpb = std::conj(zp);
    cplx C = (R * R - azp * azp) * (R * R - azp * azp) / (zp * zp);
    return iu * dth * zpb * zpb - (R * R * R / zp) * (1.0 / ea - 1.0 / eb) + C * (dlog - iu * dth);
}

bool origin_centered(const FactorGrid& g) {
    return g.polar && std::abs(g.dom.center) <= 1e-14 * g.dom.radius;
}

// Single dot-product routine shared by the precomputed and on-the-fly paths,
// so the two give bitwise identical results.
cplx weighted_dot(const cplx* f, const cplx* w, std::size_t n) {
    cplx acc{0.0, 0.0};
    for (std::size_t c = 0; c < n; ++c) acc += f[c] * w[c];
    return acc;
}

thread_local std::vector<cplx> scratch_w;

} // namespace

cplx cell_kernel_integral(const FactorGrid& g, int cell, cplx z) {
    cplx acc;
    if (g.polar) {
        double r0 = g.g0[cell], r1 = g.g1[cell], t0 = g.g2[cell], t1 = g.g3[cell];
        cplx c0 = g.dom.center;
        acc = straight_piece(c0 + std::polar(r0, t0), c0 + std::polar(r1, t0), z);
        acc += arc_piece(c0, r1, t0, t1, z);
        acc += straight_piece(c0 + std::polar(r1, t1), c0 + std::polar(r0, t1), z);
        if (r0 > 0) acc += arc_piece(c0, r0, t1, t0, z);
    } else {
        cplx p0{g.g0[cell], g.g2[cell]}, p1{g.g1[cell], g.g2[cell]};
        cplx p2{g.g1[cell], g.g3[cell]}, p3{g.g0[cell], g.g3[cell]};
        acc = straight_piece(p0, p1, z) + straight_piece(p1, p2, z) + straight_piece(p2, p3, z) +
              straight_piece(p3, p0, z);
    }
    return acc / (2.0 * iu);
}

cplx cell_conj_ratio_integral(const FactorGrid& g, int cell, cplx z) {
    cplx acc;
    if (g.polar) {
        double r0 = g.g0[cell], r1 = g.g1[cell], t0 = g.g2[cell], t1 = g.g3[cell];
        cplx c0 = g.dom.center;
        acc = straight_piece2(c0 + std::polar(r0, t0), c0 + std::polar(r1, t0), z);
        acc += arc_piece2(c0, r1, t0, t1, z);
        acc += straight_piece2(c0 + std::polar(r1, t1), c0 + std::polar(r0, t1), z);
        if (r0 > 0) acc += arc_piece2(c0, r0, t1, t0, z);
    } else {
        cplx p0{g.g0[cell], g.g2[cell]}, p1{g.g1[cell], g.g2[cell]};
        cplx p2{g.g1[cell], g.g3[cell]}, p3{g.g0[cell], g.g3[cell]};
        acc = straight_piece2(p0, p1, z) + straight_piece2(p1, p2, z) +
              straight_piece2(p2, p3, z) + straight_piece2(p3, p0, z);
    }
    return acc / (4.0 * iu);
}

cplx cell_weight_integral(const FactorGrid& g, int cell, int j) {
    if (!origin_centered(g)) throw std::logic_error("cell_weight_integral: origin-centered polar grid required");
    if (j < 1) throw std::invalid_argument("cell_weight_integral: need j >= 1");
    double r0 = g.g0[cell], r1 = g.g1[cell], t0 = g.g2[cell], t1 = g.g3[cell];
    double radial;
    if (j == 2) {
        if (r0 <= 0) throw std::domain_error("weighted kernel not integrable: cell touches 0");
        radial = std::log(r1 / r0);
    } else {
        double e = 2.0 - j;
        if (r0 <= 0 && e < 0) throw std::domain_error("weighted kernel not integrable: cell touches 0");
        radial = (std::pow(r1, e) - (r0 > 0 ? std::pow(r0, e) : 0.0)) / e;
    }
    cplx angular = (iu / static_cast<double>(j)) *
                   (std::polar(1.0, -j * t1) - std::polar(1.0, -j * t0));
    return radial * angular;
}

cplx cell_cauchy_weight(const FactorGrid& g, int cell, int k, cplx z, double rho) {
    cplx zc = g.node[cell];
    bool near = std::abs(zc - z) <= rho * g.hloc[cell];
    bool weighted_inner = k >= 1 && g.innermost(cell) && origin_centered(g);
    if (!near) {
        if (k >= 2 && g.innermost(cell) && origin_centered(g))
            return cell_weight_integral(g, cell, k) / (zc - z);  // throws: not integrable
        return ipow(zc, -k) * g.area[cell] / (zc - z);
    }
    cplx S = cell_kernel_integral(g, cell, z);
    if (!weighted_inner) return ipow(zc, -k) * S;
    // z close to a weighted innermost cell: split the kernel exactly,
    //   zeta^{-k} (zeta-z)^{-1} = z^{-k} (zeta-z)^{-1} - sum_j z^{j-k-1} zeta^{-j}.
    cplx acc = ipow(z, -k) * S;
    for (int j = 1; j <= k; ++j) acc -= ipow(z, j - k - 1) * cell_weight_integral(g, cell, j);
    return acc;
}

cplx cauchy_area_point(const FactorGrid& g, std::span<const cplx> f, int k, cplx z, double rho) {
    if (f.size() != g.size()) throw std::invalid_argument("cauchy_area_point: sample count mismatch");
    if (!g.dom.contains(z)) throw std::invalid_argument("cauchy_area_point: target outside domain");
    if (z == cplx{0.0, 0.0} && k != 0) {
        if (k > 0) return {0.0, 0.0};
        throw std::invalid_argument("cauchy_area_point: negative weight at z = 0");
    }
    scratch_w.resize(g.size());
    for (std::size_t c = 0; c < g.size(); ++c)
        scratch_w[c] = cell_cauchy_weight(g, static_cast<int>(c), k, z, rho);
    return ipow(z, k) * (-1.0 / pi) * weighted_dot(f.data(), scratch_w.data(), g.size());
}

void FactorKernel::build(const FactorGrid& grid, int k_, double rho_, std::size_t byte_cap) {
    // Fail here rather than inside a parallel fill loop.
    if (k_ >= 2 && origin_centered(grid))
        throw std::domain_error("FactorKernel: weight k >= 2 is not integrable on a grid touching 0");
    g = &grid;
    k = k_;
    rho = rho_;
    std::size_t n = grid.size();
    dense = n * n * sizeof(cplx) <= byte_cap;
    if (!dense)
        W.clear();
    else
        W.assign(n * n, cplx{});
    // The exact-correction pass costs one closed-form contour integral per
    // (target, cell) pair, so it shares the dense budget.  Past the cap the
    // kernel is plain frozen-sample quadrature; at those node counts the
    // midpoint error is already far below the tolerances used on such grids.
    corr.assign(n, cplx{});
    if (!dense) {
        near_ptr.clear();
        near_cell.clear();
        near_mz.clear();
        near_mzb.clear();
        return;
    }
    const bool can_stencil =
        grid.polar ? (grid.n1 >= 5 && grid.n2 >= 6) : (grid.n1 >= 5 && grid.n2 >= 5);
    std::vector<std::vector<int>> cells(n);
    std::vector<std::vector<cplx>> mzs(n), mzbs(n);
    parallel_for(n, [&](std::size_t t) {
        cplx z = grid.node[t];
        cplx pref = ipow(z, k) * (-1.0 / pi);
        cplx miss{0.0, 0.0};  // exact-minus-midpoint kernel mass over far cells
        for (std::size_t c = 0; c < n; ++c) {
            W[t * n + c] = cell_cauchy_weight(grid, static_cast<int>(c), k, z, rho);
            cplx zc = grid.node[c];
            bool weighted_inner =
                k >= 1 && grid.innermost(static_cast<int>(c)) && origin_centered(grid);
            if (std::abs(zc - z) <= rho * grid.hloc[c]) {
                if (weighted_inner || !can_stencil) continue;
                // First moments of the kernel about the cell node, exact.
                cplx S = cell_kernel_integral(grid, static_cast<int>(c), z);
                cplx mz = grid.area[c] + (z - zc) * S;
                cplx mzb = cell_conj_ratio_integral(grid, static_cast<int>(c), z) +
                           std::conj(z - zc) * S;
                cells[t].push_back(static_cast<int>(c));
                mzs[t].push_back(pref * ipow(zc, -k) * mz);
                mzbs[t].push_back(pref * ipow(zc, -k) * mzb);
            } else if (!(k >= 2 && weighted_inner)) {
                miss += ipow(zc, -k) *
                        (cell_kernel_integral(grid, static_cast<int>(c), z) -
                         grid.area[c] / (zc - z));
            }
        }
        corr[t] = pref * miss;
    });
    near_ptr.assign(n + 1, 0);
    for (std::size_t t = 0; t < n; ++t) near_ptr[t + 1] = near_ptr[t] + cells[t].size();
    near_cell.clear();
    near_mz.clear();
    near_mzb.clear();
    near_cell.reserve(near_ptr[n]);
    near_mz.reserve(near_ptr[n]);
    near_mzb.reserve(near_ptr[n]);
    for (std::size_t t = 0; t < n; ++t) {
        near_cell.insert(near_cell.end(), cells[t].begin(), cells[t].end());
        near_mz.insert(near_mz.end(), mzs[t].begin(), mzs[t].end());
        near_mzb.insert(near_mzb.end(), mzbs[t].begin(), mzbs[t].end());
    }
}

cplx FactorKernel::eval(std::span<const cplx> f, cplx z) const {
    return cauchy_area_point(*g, f, k, z, rho);
}

namespace {

// Node-target quadrature corrections for one fiber: constant subtraction
// against corr, then the near-field gradient terms.  fib is a contiguous
// fiber copy; out may be strided.  Serial per fiber, deterministic.
void add_node_corrections(const FactorKernel& kn, const cplx* fib, cplx* out, std::size_t ostr) {
    const FactorGrid& fg = *kn.g;
    const std::size_t n = fg.size();
    for (std::size_t t = 0; t < n; ++t) out[t * ostr] += fib[t] * kn.corr[t];
    if (kn.near_ptr.empty() || kn.near_ptr[n] == 0) return;
    thread_local std::vector<cplx> cj, dzb, dzc;
    cj.resize(n);
    dzb.resize(n);
    dzc.resize(n);
    fiber_dbar(fg, fib, dzb.data(), 1);
    for (std::size_t i = 0; i < n; ++i) cj[i] = std::conj(fib[i]);
    fiber_dbar(fg, cj.data(), dzc.data(), 1);  // conj gives d/dz of the samples
    for (std::size_t t = 0; t < n; ++t) {
        cplx acc{0.0, 0.0};
        for (std::size_t p = kn.near_ptr[t]; p < kn.near_ptr[t + 1]; ++p) {
            const int c = kn.near_cell[p];
            cplx fz = std::conj(dzc[c]);
            if (kn.k != 0) fz -= static_cast<double>(kn.k) * fib[c] / fg.node[c];
            acc += fz * kn.near_mz[p] + dzb[c] * kn.near_mzb[p];
        }
        out[t * ostr] += acc;
    }
}

} // namespace

void FactorKernel::apply_to_nodes(std::span<const cplx> f, std::span<cplx> out) const {
    std::size_t n = g->size();
    if (dense) {
        parallel_for(n, [&](std::size_t t) {
            out[t] = ipow(g->node[t], k) * (-1.0 / pi) * weighted_dot(f.data(), W.data() + t * n, n);
        });
    } else {
        parallel_for(n, [&](std::size_t t) { out[t] = eval(f, g->node[t]); });
    }
    add_node_corrections(*this, f.data(), out.data(), 1);
}

void axis_area_apply(const ProductGrid& grid, int axis, const FactorKernel& kern,
                     std::span<const cplx> in, std::span<cplx> out) {
    if (kern.g != &grid.factor[axis]) throw std::logic_error("axis_area_apply: kernel built on wrong factor");
    std::size_t ne = grid.factor[axis].size();
    if (grid.n() == 1) {
        kern.apply_to_nodes(in, out);
        return;
    }
    std::size_t astride = grid.stride[axis];
    // Strides of the fiber enumeration (all factors except `axis`).
    std::vector<std::size_t> fdim, fstr;
    for (int j = 0; j < grid.n(); ++j)
        if (j != axis) {
            fdim.push_back(grid.factor[j].size());
            fstr.push_back(grid.stride[j]);
        }
    std::vector<std::size_t> fred(fdim.size(), 1);
    for (int j = static_cast<int>(fdim.size()) - 2; j >= 0; --j) fred[j] = fred[j + 1] * fdim[j + 1];
    std::size_t fibers = grid.total / ne;
    const FactorGrid& fg = grid.factor[axis];
    parallel_for(fibers, [&](std::size_t fib) {
        std::size_t rem = fib, base = 0;
        for (std::size_t j = 0; j < fdim.size(); ++j) {
            base += (rem / fred[j]) * fstr[j];
            rem %= fred[j];
        }
        std::vector<cplx> buf(ne);
        for (std::size_t c = 0; c < ne; ++c) buf[c] = in[base + c * astride];
        if (kern.dense) {
            for (std::size_t t = 0; t < ne; ++t)
                out[base + t * astride] = ipow(fg.node[t], kern.k) * (-1.0 / pi) *
                                          weighted_dot(buf.data(), kern.W.data() + t * ne, ne);
        } else {
            for (std::size_t t = 0; t < ne; ++t)
                out[base + t * astride] = cauchy_area_point(fg, buf, kern.k, fg.node[t], kern.rho);
        }
        add_node_corrections(kern, buf.data(), out.data() + base, astride);
    });
}

BoundaryValue cauchy_boundary_point(const BoundaryCurve& c, std::span<const cplx> g, int k, cplx z) {
    if (g.size() != c.node.size()) throw std::invalid_argument("cauchy_boundary_point: sample count mismatch");
    cplx acc{0.0, 0.0};
    double dmin = 1e300;
    for (std::size_t i = 0; i < c.node.size(); ++i) {
        cplx dz = c.node[i] - z;
        dmin = std::min(dmin, std::abs(dz));
        acc += g[i] * ipow(c.node[i], -k) * c.tangent[i] * c.weight[i] / dz;
    }
    BoundaryValue out;
    out.value = ipow(z, k) * acc / (tau * iu);
    out.near_boundary = dmin < 2.0 * c.spacing;
    return out;
}

void axis_boundary_apply(const ProductGrid& grid, int axis, const BoundaryCurve& curve, int k,
                         const std::function<cplx(std::size_t fiber_base, int bnode)>& sample,
                         std::span<cplx> out) {
    std::size_t ne = grid.factor[axis].size();
    std::size_t astride = grid.stride[axis];
    std::size_t mb = curve.node.size();
    std::vector<cplx> cw(mb);  // zeta^{-k} * tangent * weight, fixed per curve
    for (std::size_t i = 0; i < mb; ++i)
        cw[i] = ipow(curve.node[i], -k) * curve.tangent[i] * curve.weight[i];
    std::vector<std::size_t> fdim, fstr;
    for (int j = 0; j < grid.n(); ++j)
        if (j != axis) {
            fdim.push_back(grid.factor[j].size());
            fstr.push_back(grid.stride[j]);
        }
    std::vector<std::size_t> fred(fdim.size(), 1);
    for (int j = static_cast<int>(fdim.size()) - 2; j >= 0; --j) fred[j] = fred[j + 1] * fdim[j + 1];
    std::size_t fibers = grid.total / ne;
    const FactorGrid& fg = grid.factor[axis];
    parallel_for(fibers, [&](std::size_t fib) {
        std::size_t rem = fib, base = 0;
        for (std::size_t j = 0; j < fdim.size(); ++j) {
            base += (rem / fred[j]) * fstr[j];
            rem %= fred[j];
        }
        std::vector<cplx> s(mb);
        for (std::size_t i = 0; i < mb; ++i) s[i] = sample(base, static_cast<int>(i)) * cw[i];
        for (std::size_t t = 0; t < ne; ++t) {
            cplx z = fg.node[t];
            cplx acc{0.0, 0.0};
            for (std::size_t i = 0; i < mb; ++i) acc += s[i] / (curve.node[i] - z);
            out[base + t * astride] = ipow(z, k) * acc / (tau * iu);
        }
    });
}

double pompeiu_residual(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& dbar_f,
                        const FactorGrid& g, const BoundaryCurve& curve, cplx z) {
    std::vector<cplx> df(g.size());
    for (std::size_t c = 0; c < g.size(); ++c) df[c] = dbar_f(g.node[c]);
    cplx area = cauchy_area_point(g, df, 0, z);
    std::vector<cplx> bf(curve.node.size());
    for (std::size_t i = 0; i < curve.node.size(); ++i) bf[i] = f(curve.node[i]);
    cplx bnd = cauchy_boundary_point(curve, bf, 0, z).value;
    return std::abs(f(z) - area - bnd);
}

namespace {

struct JRRule {
    double alpha, beta;
    cplx z;

    double radial_mass(double r0, double r1) const {
        double e = 2.0 - alpha;
        return (std::pow(r1, e) - (r0 > 0 ? std::pow(r0, e) : 0.0)) / e;
    }
    double radial_centroid(double r0, double r1, double m) const {
        double e = 3.0 - alpha;
        return ((std::pow(r1, e) - (r0 > 0 ? std::pow(r0, e) : 0.0)) / e) / m;
    }
    double leaf(double r0, double r1, double t0, double t1, int depth) const {
        double m = radial_mass(r0, r1);
        if (!(m > 0)) return 0.0;
        double rc = radial_centroid(r0, r1, m);
        cplx tc = std::polar(rc, 0.5 * (t0 + t1));
        double h = std::max(r1 - r0, rc * (t1 - t0));
        double d = std::abs(tc - z);
        if (depth >= 8 || d > 1.5 * h) {
            if (d > 0.25 * h) return m * (t1 - t0) * std::pow(d, -beta);
            // Cell containing the kernel singularity: equivalent-disc mass.
            double area = 0.5 * (t1 - t0) * (r1 * r1 - r0 * r0);
            double req = std::sqrt(area / pi);
            return std::pow(rc, -alpha) * tau * std::pow(req, 2.0 - beta) / (2.0 - beta);
        }
        double rm = 0.5 * (r0 + r1), tm = 0.5 * (t0 + t1);
        return leaf(r0, rm, t0, tm, depth + 1) + leaf(r0, rm, tm, t1, depth + 1) +
               leaf(rm, r1, t0, tm, depth + 1) + leaf(rm, r1, tm, t1, depth + 1);
    }
};

} // namespace

double radial_kernel_integral(double R, double alpha, double beta, cplx z, int n_r, int n_th) {
    if (!(alpha < 2.0) || !(beta < 2.0))
        throw std::invalid_argument("radial_kernel_integral: need alpha < 2 and beta < 2");
    if (!(std::abs(z) < R)) throw std::invalid_argument("radial_kernel_integral: need |z| < R");
    double az = std::abs(z);
    if (az <= 1e-12 * R) {
        // Radially symmetric integrand; the closed form is exact.
        double e = 2.0 - alpha - beta;
        if (e <= 0) throw std::invalid_argument("radial_kernel_integral: divergent at z = 0");
        return tau * std::pow(R, e) / e;
    }
    JRRule rule{alpha, beta, z};
    double r_in = az / 128.0;
    double q = std::log(R / r_in) / n_r;
    double dth = tau / n_th;
    std::vector<double> terms(static_cast<std::size_t>(n_r + 1) * n_th);
    parallel_for(terms.size(), [&](std::size_t idx) {
        int i = static_cast<int>(idx) / n_th - 1;  // ring -1 is the inner disc [0, r_in]
        int j = static_cast<int>(idx) % n_th;
        double r0 = i < 0 ? 0.0 : r_in * std::exp(q * i);
        double r1 = i < 0 ? r_in : r_in * std::exp(q * (i + 1));
        double t0 = j * dth, t1 = (j + 1) * dth;
        double m = rule.radial_mass(r0, r1);
        double rc = rule.radial_centroid(r0, r1, m);
        cplx tc = std::polar(rc, 0.5 * (t0 + t1));
        double h = std::max(r1 - r0, rc * dth);
        double d = std::abs(tc - z);
        terms[idx] = (d > 2.0 * h) ? m * dth * std::pow(d, -beta) : rule.leaf(r0, r1, t0, t1, 0);
    });
    return det_sum(std::span<const double>(terms));
}

std::vector<unsigned char> interior_mask(const ProductGrid& grid, double margin_cells) {
    std::vector<unsigned char> mask(grid.total, 1);
    parallel_for(grid.total, [&](std::size_t flat) {
        for (int j = 0; j < grid.n(); ++j) {
            const FactorGrid& f = grid.factor[j];
            if (f.dom.boundary_distance(grid.coord(flat, j)) < margin_cells * f.spacing()) {
                mask[flat] = 0;
                return;
            }
        }
    });
    return mask;
}

} // namespace dolbeault
