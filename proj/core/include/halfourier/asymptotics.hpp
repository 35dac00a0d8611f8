#pragma once

// Quantitative checks of the lambda -> inf behaviour of half-line Fourier
// transforms: the scaled limit lambda^{1-p} f_hat(lambda) -> ell * m(p), the
// shift/parts identity behind it, the I1/I2/I3 decomposition, and the beta
// staircase that balances the error terms.

#include <string>
#include <utility>
#include <vector>

#include "halfourier/kernels.hpp"
#include "halfourier/oscquad.hpp"

namespace halfourier::asymptotics {

struct AsymptoteRow {
    double lambda = 0.0;
    Complex scaled;          // lambda^{1-p} * f_hat(lambda)
    double deviation = 0.0;  // |scaled - target|
    bool converged = true;   // false when quadrature missed its tolerance
    std::string note;        // failure annotation, empty otherwise
};

struct AsymptoteReport {
    kernels::LimitPair pair;
    Complex target;                   // ell * m(p)
    std::vector<AsymptoteRow> rows;   // ascending lambda
    double fitted_slope = 0.0;        // of log deviation vs log lambda
};

// Scaled transforms and deviations over the grid, plus the convergence-rate
// slope. Rows whose deviation sits at the roundoff floor (< 100 eps) are
// excluded from the fit. With use_closed_form the transform comes from the
// kernel's closed form when available; otherwise every row runs the
// quadrature path. Quadrature failures annotate their row instead of
// aborting the report.
AsymptoteReport verify_theorem1(const kernels::MemoryKernel& k,
                                kernels::LimitPair pair,
                                std::vector<double> lambda_grid,
                                const oscquad::QuadConfig& cfg = {},
                                bool use_closed_form = true);

// Residual of the shift/parts identity on [alpha, inf): both sides are
// quadratures sharing no terms, so the residual measures real error.
//   lambda^{1-p} I(alpha) = (lambda^{1-p}/2) * (half-period f integral)
//     + (i e^{-i lambda alpha} / (2 lambda^p)) [f(alpha+pi/lambda) - f(alpha)]
//     - (i/lambda^p) * (f' integral to inf)
//     + (i/(2 lambda^p)) * (half-period f' integral)
// The exponent p comes from the kernel's metadata (0 when absent); it only
// rescales both sides.
double check_lemma1(const kernels::MemoryKernel& k, double lambda, double alpha,
                    double tol = 1e-9);

// Residual of the p=0 endpoint form (alpha -> 0 with f extended
// continuously by ell):
//   lambda f_hat(lambda) = (lambda/2) \int_0^{pi/lambda} e^{-i lambda s} f
//     + (i/2)[f(pi/lambda) - ell] - i \int_0^inf e^{-i lambda s} f'
//     + (i/2) \int_0^{pi/lambda} e^{-i lambda s} f'
double check_p0_formula(const kernels::MemoryKernel& k, double ell,
                        double lambda, double tol = 1e-9);

// Staircase beta(lambda): breakpoints lambda_n (strictly increasing,
// lambda_n >= n^2) with omega(n / lambda_n) <= 1/n^2; beta(lambda) = n on
// [lambda_n, lambda_{n+1}).
struct BetaSchedule {
    std::vector<std::pair<double, int>> breakpoints;  // (lambda_n, n)

    // n of the last breakpoint at or below lambda; 0 below the first one.
    double beta_at(double lambda) const;
};

// Each lambda_n is the smallest admissible value (>= max(n^2, prev+1)),
// located by bisection; omega nondecreasing makes the constraint monotone
// in lambda. Throws std::runtime_error if no admissible lambda_n exists
// below 1e18 (omega fails to vanish at 0).
BetaSchedule build_beta_schedule(const kernels::ModulusOfContinuity& omega,
                                 int n_max);

// lambda^{1-p} f_hat(lambda) = I1 + I2 + I3 with
//   I1 = ell * lambda^{1-p} \int_0^{beta/lambda} e^{-i lambda s} s^{-p} ds
//   I2 = lambda^{1-p} \int_0^{beta/lambda} e^{-i lambda s} (s^p f - ell) s^{-p} ds
//   I3 = lambda^{1-p} \int_{beta/lambda}^inf e^{-i lambda s} f ds
// computed by three independent routes.
struct Decomposition {
    Complex I1, I2, I3;
    double lambda = 0.0;
    double beta = 0.0;
};

Decomposition decompose(const kernels::MemoryKernel& k, kernels::LimitPair pair,
                        double lambda, double beta,
                        const oscquad::QuadConfig& cfg = {});

}  // namespace halfourier::asymptotics
