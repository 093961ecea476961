#include "dolbeault/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dolbeault {

namespace {
constexpr double tau = 2.0 * std::numbers::pi;
}

PlanarDomain PlanarDomain::disc(cplx center, double radius) {
    if (!(radius > 0)) throw std::invalid_argument("disc: radius must be positive");
    PlanarDomain d;
    d.shape = Shape::disc;
    d.center = center;
    d.radius = radius;
    return d;
}

PlanarDomain PlanarDomain::rectangle(cplx lo, cplx hi) {
    if (!(lo.real() < hi.real() && lo.imag() < hi.imag()))
        throw std::invalid_argument("rectangle: need lo < hi componentwise");
    PlanarDomain d;
    d.shape = Shape::rectangle;
    d.lo = lo;
    d.hi = hi;
    d.center = 0.5 * (lo + hi);
    return d;
}

bool PlanarDomain::contains(cplx z) const {
    if (shape == Shape::disc) return std::abs(z - center) < radius;
    return z.real() > lo.real() && z.real() < hi.real() && z.imag() > lo.imag() && z.imag() < hi.imag();
}

double PlanarDomain::boundary_distance(cplx z) const {
    if (shape == Shape::disc) return std::abs(radius - std::abs(z - center));
    double dx = std::min(std::abs(z.real() - lo.real()), std::abs(hi.real() - z.real()));
    double dy = std::min(std::abs(z.imag() - lo.imag()), std::abs(hi.imag() - z.imag()));
    if (contains(z)) return std::min(dx, dy);
    double ox = std::max({lo.real() - z.real(), 0.0, z.real() - hi.real()});
    double oy = std::max({lo.imag() - z.imag(), 0.0, z.imag() - hi.imag()});
    return std::hypot(ox, oy);
}

double PlanarDomain::diameter() const {
    if (shape == Shape::disc) return 2 * radius;
    return std::abs(hi - lo);
}

double PlanarDomain::area() const {
    if (shape == Shape::disc) return std::numbers::pi * radius * radius;
    return (hi.real() - lo.real()) * (hi.imag() - lo.imag());
}

PlanarDomain PlanarDomain::scaled(double factor) const {
    if (shape == Shape::disc) return disc(center, radius * factor);
    cplx half = 0.5 * factor * (hi - lo);
    return rectangle(center - half, center + half);
}

FactorGrid make_grid(const PlanarDomain& dom, int a, int b) {
    FactorGrid g;
    g.dom = dom;
    if (dom.shape == PlanarDomain::Shape::disc) {
        if (a < 2 || b < 4) throw std::invalid_argument("make_grid: disc needs n_r >= 2, n_th >= 4");
        if (b % 2 != 0) throw std::invalid_argument("make_grid: n_th must be even");
        g.polar = true;
        g.n1 = a;
        g.n2 = b;
        double dr = dom.radius / a, dth = tau / b;
        g.node.reserve(static_cast<std::size_t>(a) * b);
        for (int i = 0; i < a; ++i) {
            double r0 = i * dr, r1 = (i + 1) * dr, rc = (i + 0.5) * dr;
            for (int j = 0; j < b; ++j) {
                double th0 = j * dth, th1 = (j + 1) * dth, thc = (j + 0.5) * dth;
                g.node.push_back(dom.center + std::polar(rc, thc));
                g.area.push_back(0.5 * dth * (r1 * r1 - r0 * r0));
                g.hloc.push_back(std::max(dr, rc * dth));
                g.g0.push_back(r0);
                g.g1.push_back(r1);
                g.g2.push_back(th0);
                g.g3.push_back(th1);
            }
        }
    } else {
        if (a < 2 || b < 2) throw std::invalid_argument("make_grid: rectangle needs nx, ny >= 2");
        g.polar = false;
        g.n1 = b;  // rows
        g.n2 = a;  // cols
        double w = dom.hi.real() - dom.lo.real(), h = dom.hi.imag() - dom.lo.imag();
        double dx = w / a, dy = h / b;
        for (int iy = 0; iy < b; ++iy) {
            double y0 = dom.lo.imag() + iy * dy, y1 = y0 + dy;
            for (int ix = 0; ix < a; ++ix) {
                double x0 = dom.lo.real() + ix * dx, x1 = x0 + dx;
                g.node.push_back(cplx(x0 + 0.5 * dx, y0 + 0.5 * dy));
                g.area.push_back(dx * dy);
                g.hloc.push_back(std::max(dx, dy));
                g.g0.push_back(x0);
                g.g1.push_back(x1);
                g.g2.push_back(y0);
                g.g3.push_back(y1);
            }
        }
    }
    return g;
}

int FactorGrid::cell_of(cplx z) const {
    if (polar) {
        cplx w = z - dom.center;
        double r = std::abs(w);
        if (r >= dom.radius) return -1;
        double dr = dom.radius / n1, dth = tau / n2;
        int i = std::min(static_cast<int>(r / dr), n1 - 1);
        double th = std::arg(w);
        if (th < 0) th += tau;
        int j = std::min(static_cast<int>(th / dth), n2 - 1);
        return i * n2 + j;
    }
    if (!dom.contains(z)) return -1;
    double dx = (dom.hi.real() - dom.lo.real()) / n2, dy = (dom.hi.imag() - dom.lo.imag()) / n1;
    int ix = std::min(static_cast<int>((z.real() - dom.lo.real()) / dx), n2 - 1);
    int iy = std::min(static_cast<int>((z.imag() - dom.lo.imag()) / dy), n1 - 1);
    return iy * n2 + ix;
}

bool FactorGrid::innermost(int cell) const { return polar && cell >= 0 && cell < n2; }

double FactorGrid::spacing() const {
    if (polar) return dom.radius / n1;
    return std::max((dom.hi.real() - dom.lo.real()) / n2, (dom.hi.imag() - dom.lo.imag()) / n1);
}

ProductGrid make_product(std::vector<FactorGrid> factors) {
    if (factors.empty()) throw std::invalid_argument("make_product: need at least one factor");
    ProductGrid p;
    p.factor = std::move(factors);
    p.stride.assign(p.factor.size(), 1);
    for (int j = static_cast<int>(p.factor.size()) - 2; j >= 0; --j)
        p.stride[j] = p.stride[j + 1] * p.factor[j + 1].size();
    p.total = p.stride[0] * p.factor[0].size();
    return p;
}

FactorGrid refine_grid(const FactorGrid& g, double factor) {
    auto dim = [&](int d, int floor_v) {
        int v = static_cast<int>(std::lround(d * factor));
        return std::max(v, floor_v);
    };
    if (g.polar) {
        int nth = dim(g.n2, 4);
        nth += nth & 1;
        return make_grid(g.dom, dim(g.n1, 2), nth);
    }
    return make_grid(g.dom, dim(g.n2, 2), dim(g.n1, 2));  // (nx, ny)
}

ProductGrid refine_product(const ProductGrid& g, double factor) {
    std::vector<FactorGrid> f;
    f.reserve(g.factor.size());
    for (const auto& fg : g.factor) f.push_back(refine_grid(fg, factor));
    return make_product(std::move(f));
}

std::size_t ProductGrid::index(std::span<const int> per_factor) const {
    std::size_t flat = 0;
    for (int j = 0; j < n(); ++j) flat += static_cast<std::size_t>(per_factor[j]) * stride[j];
    return flat;
}

void ProductGrid::decompose(std::size_t flat, std::span<int> per_factor) const {
    for (int j = 0; j < n(); ++j) {
        per_factor[j] = static_cast<int>(flat / stride[j]);
        flat %= stride[j];
    }
}

cplx ProductGrid::coord(std::size_t flat, int axis) const {
    std::size_t i = (flat / stride[axis]) % factor[axis].size();
    return factor[axis].node[i];
}

BoundaryCurve boundary_nodes(const PlanarDomain& dom, int m_b) {
    if (m_b < 4) throw std::invalid_argument("boundary_nodes: need at least 4 nodes");
    BoundaryCurve c;
    if (dom.shape == PlanarDomain::Shape::disc) {
        double dt = tau / m_b;
        for (int i = 0; i < m_b; ++i) {
            double t = i * dt;
            c.node.push_back(dom.center + std::polar(dom.radius, t));
            c.tangent.push_back(cplx(0, 1) * std::polar(dom.radius, t));
            c.weight.push_back(dt);
        }
        c.spacing = dom.radius * dt;
        return c;
    }
    // Counterclockwise: bottom, right, top, left.  Midpoint nodes per edge,
    // node count proportional to edge length (at least 2 per edge).
    double w = dom.hi.real() - dom.lo.real(), h = dom.hi.imag() - dom.lo.imag();
    double per = 2 * (w + h);
    cplx corners[5] = {dom.lo, dom.lo + cplx(w, 0), dom.hi, dom.lo + cplx(0, h), dom.lo};
    int used = 0;
    for (int e = 0; e < 4; ++e) {
        double len = std::abs(corners[e + 1] - corners[e]);
        int m = (e == 3) ? (m_b - used) : std::max(2, static_cast<int>(std::lround(m_b * len / per)));
        if (m < 2) throw std::invalid_argument("boundary_nodes: too few nodes for rectangle edges");
        used += m;
        cplx dir = (corners[e + 1] - corners[e]) / static_cast<double>(m);
        for (int i = 0; i < m; ++i) {
            c.node.push_back(corners[e] + (i + 0.5) * dir);
            c.tangent.push_back(dir);  // dzeta/dt with unit parameter step per node
            c.weight.push_back(1.0);
        }
        c.spacing = std::max(c.spacing, std::abs(dir));
    }
    return c;
}

} // namespace dolbeault
