#pragma once

// Half-line Fourier transforms f_hat(lambda) = \int_0^inf e^{-i lambda s} f(s) ds
// for kernels with an algebraic endpoint singularity s^{-p}, p in [0, 1).
//
// The singular window (0, beta/lambda] is handled by subtracting the model
// ell * s^{-p}, whose transform over the window has a closed form in terms of
// m(p) and a tail integral (lemma2_rhs); what remains is bounded and goes to
// graded panels. Beyond the window, oscillation-resolved panels run up to a
// cutoff T chosen so the remaining kernel mass is below tol/4.

#include <optional>

#include "halfourier/errors.hpp"
#include "halfourier/kernels.hpp"

namespace halfourier::oscquad {

struct QuadConfig {
    double tol = 1e-10;
    long max_panels = 1L << 22;
    // Split parameter beta: the singular window ends at split_point / lambda.
    double split_point = 1.0;
};

struct HalfFourierResult {
    double lambda = 0.0;
    Complex value;
    double err_est = 0.0;     // realized refinement delta, not a bound
    long panels_used = 0;
    double tail_cutoff = 0.0; // integration truncated at this point
};

// f_hat(lambda). The pair overrides the kernel's own metadata when given.
// Throws ToleranceNotReached (carrying the best estimate and the achieved
// error) and NotSummableError when the tail mass refuses to settle.
HalfFourierResult half_fourier(const kernels::MemoryKernel& k,
                               std::optional<kernels::LimitPair> pair,
                               double lambda, const QuadConfig& cfg = {});

// lambda^{1-p} \int_0^{beta/lambda} e^{-i lambda s} s^{-p} ds by direct
// quadrature after the substitution u = s^{1-p}.
Complex lemma2_lhs(double p, double lambda, double beta, double tol = 1e-11);

// m(p) + i e^{-i beta} / beta^p - (i p / beta^p) \int_1^inf e^{-i beta s} s^{-(1+p)} ds.
// Equals lemma2_lhs for every lambda > 0.
Complex lemma2_rhs(double p, double beta);

}  // namespace halfourier::oscquad
