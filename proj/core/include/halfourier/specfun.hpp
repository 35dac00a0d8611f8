#pragma once

// Special-function kernel of the library: the real Gamma function, the
// constant m(p) that scaled half-line Fourier transforms converge to, and
// the oscillatory power-law tail integral both are cross-checked against.

#include "halfourier/errors.hpp"

namespace halfourier::specfun {

// Gamma(x) for x > 0. Lanczos approximation, relative error well under
// 1e-12 on (0, 2]. Throws std::domain_error for x <= 0.
double gamma_real(double x);

// m(p) = -i * e^{i p pi/2} * Gamma(1 - p) for p in [0, 1).
// Modulus Gamma(1-p), argument p*pi/2 - pi/2; m(0) = -i.
Complex asymp_constant(double p);

// \int_1^inf e^{-i beta s} s^{-q} ds for q in (0, 4), beta > 0, to absolute
// tolerance tol. Integrates by parts until the power exceeds 3 (boundary
// terms are exact), then sums oscillation-resolved panels on [1, T] with T
// chosen so the analytic remainder bound |rest| <= 2 T^{-q'} / beta stays
// under the remaining budget. Throws ToleranceNotReached with the best
// estimate when the panel budget runs out.
Complex tail_integral(double q, double beta, double tol = 1e-12);

// \int_0^inf e^{-is} s^{-p} ds evaluated by quadrature: substitution
// u = s^{1-p} on (0, 1], tail via the machinery above (for p = 0 the tail
// reduces to the exact boundary term -i e^{-i}). Equals asymp_constant(p);
// kept as an independent route for cross-checking, not for production use.
Complex mp_by_quadrature(double p, double tol = 1e-10);

}  // namespace halfourier::specfun
