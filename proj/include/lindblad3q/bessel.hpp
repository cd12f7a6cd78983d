#pragma once

#include "lindblad3q/types.hpp"

namespace lindblad3q {

// Bessel function of the first kind, integer order, complex argument.
// Ascending series for small |z|; Miller downward recurrence (sum-rule
// normalized) otherwise. Documented envelope: |l| <= 200, |z| <= 200.
cdouble bessel_j_complex(int l, cdouble z);

// J_0 .. J_lmax in one downward pass; cheaper than lmax+1 separate calls.
void bessel_j_complex_ladder(int lmax, cdouble z, cdouble* out);

namespace detail {
// Same evaluation with the overflow-limited internal cap (|z| <= 600). The
// Kerr series needs it at grid corners where the terms are still damped by
// Gaussian prefactors; double range accommodates e^{|Im z|} comfortably.
cdouble bessel_j_wide(int l, cdouble z);
}  // namespace detail

}  // namespace lindblad3q
