#include "dolbeault/testfns.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dolbeault {

namespace {

std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

cplx zero_fn(unsigned, std::span<const cplx>) { return {0.0, 0.0}; }

void require_dim(const std::string& name, int n, int need) {
    if (n < need)
        throw std::invalid_argument("named_form: '" + name + "' needs n >= " +
                                    std::to_string(need) + ", got n = " + std::to_string(n));
}

} // namespace

std::vector<std::string> form_names() {
    return {"zero",
            "dz1",
            "conjz1_dz1",
            "conjz2_dz1",
            "conjz2_dz1_plus_conjz1_dz2",
            "dz1_wedge_dz2"};
}

SmoothForm named_form(const std::string& name, int n) {
    if (n < 1) throw std::invalid_argument("named_form: n must be positive");
    SmoothForm w;
    w.n = n;
    w.q = 1;
    w.dbar = zero_fn;

    if (name == "zero") {
        w.coef = zero_fn;
        return w;
    }
    if (name == "dz1") {
        w.coef = [](unsigned mask, std::span<const cplx>) -> cplx {
            return mask == 1u ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        };
        return w;
    }
    if (name == "conjz1_dz1") {
        w.coef = [](unsigned mask, std::span<const cplx> z) -> cplx {
            return mask == 1u ? std::conj(z[0]) : cplx{0.0, 0.0};
        };
        return w;
    }
    if (name == "conjz2_dz1") {
        require_dim(name, n, 2);
        w.coef = [](unsigned mask, std::span<const cplx> z) -> cplx {
            return mask == 1u ? std::conj(z[1]) : cplx{0.0, 0.0};
        };
        // dbar(conj(z2) dzbar1) = dzbar2 ^ dzbar1 = -(dzbar1 ^ dzbar2)
        w.dbar = [](unsigned mask, std::span<const cplx>) -> cplx {
            return mask == 3u ? cplx{-1.0, 0.0} : cplx{0.0, 0.0};
        };
        return w;
    }
    if (name == "conjz2_dz1_plus_conjz1_dz2") {
        require_dim(name, n, 2);
        w.coef = [](unsigned mask, std::span<const cplx> z) -> cplx {
            if (mask == 1u) return std::conj(z[1]);
            if (mask == 2u) return std::conj(z[0]);
            return {0.0, 0.0};
        };
        return w;
    }
    if (name == "dz1_wedge_dz2") {
        require_dim(name, n, 2);
        w.q = 2;
        w.coef = [](unsigned mask, std::span<const cplx>) -> cplx {
            return mask == 3u ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
        };
        return w;
    }
    throw std::invalid_argument("named_form: unknown form '" + name +
                                "'; available: " + join(form_names()));
}

std::vector<std::string> field_names() {
    return {"one", "conjz", "monomial", "abs_pow", "inv_abs", "log_pow"};
}

ScalarFn named_field(const std::string& name, const FieldParams& prm) {
    if (name == "one") {
        return [](std::span<const cplx>) -> cplx { return {1.0, 0.0}; };
    }
    if (name == "conjz") {
        return [](std::span<const cplx> z) -> cplx { return std::conj(z[0]); };
    }
    if (name == "monomial") {
        const int a = prm.a, b = prm.b;
        return [a, b](std::span<const cplx> z) -> cplx {
            cplx v{1.0, 0.0};
            for (int i = 0; i < a; ++i) v *= z[0];
            for (int i = 0; i < b; ++i) v *= std::conj(z[0]);
            for (int i = 0; i > a; --i) v /= z[0];
            for (int i = 0; i > b; --i) v /= std::conj(z[0]);
            return v;
        };
    }
    if (name == "abs_pow") {
        const double l = prm.l.value();
        return [l](std::span<const cplx> z) -> cplx {
            return {std::pow(std::abs(z[0]), l), 0.0};
        };
    }
    if (name == "inv_abs") {
        return [](std::span<const cplx> z) -> cplx { return {1.0 / std::abs(z[0]), 0.0}; };
    }
    if (name == "log_pow") {
        const double l = prm.l.value();
        return [l](std::span<const cplx> z) -> cplx {
            const double r = std::abs(z[0]);
            return {std::pow(r, l) / std::log(r), 0.0};
        };
    }
    throw std::invalid_argument("named_field: unknown field '" + name +
                                "'; available: " + join(field_names()));
}

} // namespace dolbeault
