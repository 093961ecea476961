#pragma once

#include <string>
#include <vector>

#include "dolbeault/analysis.hpp"
#include "dolbeault/homotopy.hpp"
#include "dolbeault/rational.hpp"

namespace dolbeault {

// Registry of closed-form test inputs shared by the CLI and the test suites.
// Everything here is a total callable with an exact dbar, so residuals
// measure quadrature and differencing error only.

// Named (0,q)-forms.  `n` is the ambient dimension; forms that read a second
// coordinate require n >= 2 and throw below that.  Unknown names throw
// std::invalid_argument listing the registry.
SmoothForm named_form(const std::string& name, int n);
std::vector<std::string> form_names();

// Named scalar fields of the first coordinate, for norm and witness runs.
//   one                     1
//   conjz                   conj(z)
//   monomial                z^a conj(z)^b            (parameters a, b)
//   abs_pow                 |z|^l                     (parameter l)
//   inv_abs                 |z|^{-1}
//   log_pow                 |z|^l / log|z|            (parameter l; the
//                           boundary witness shape, blows up at |z| = 1)
struct FieldParams {
    rat l{0};
    int a = 0, b = 0;
};
ScalarFn named_field(const std::string& name, const FieldParams& prm = {});
std::vector<std::string> field_names();

} // namespace dolbeault
