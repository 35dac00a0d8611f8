#pragma once

// Application layer for equations with memory: decay-rate forecasts from the
// kernel's (p, ell) data, the resolvent growth proxy lambda/|mu_hat(lambda)|,
// and a scalar-mode simulator for
//   u'' = -(alpha + M) u + \int_0^{S_max} mu(s) u(t - s) ds
// with the quadratic history energy.

#include <functional>
#include <optional>
#include <vector>

#include "halfourier/kernels.hpp"
#include "halfourier/oscquad.hpp"

namespace halfourier::memory {

struct DecayForecast {
    kernels::LimitPair pair;
    double resolvent_exponent = 0.0;  // 2 - p
    double decay_exponent = 0.0;      // 1 / (2 - p)
    bool optimal_at_p0 = false;       // p = 0 attains the optimal t^{-1/2}
};

// Throws std::domain_error for ell <= 0 or p outside [0, 1).
DecayForecast decay_forecast(kernels::LimitPair pair);

struct ProxyRow {
    double lambda = 0.0;
    double g = 0.0;  // lambda / |mu_hat(lambda)|
};

struct ProxyReport {
    std::vector<ProxyRow> rows;   // ascending lambda; mu_hat = 0 rows skipped
    double fitted_exponent = 0.0; // slope of log g vs log lambda, ~ 2 - p
    std::optional<double> predicted_prefactor;  // 1/(ell Gamma(1-p)) when known
};

// g(lambda) = lambda / |mu_hat(lambda)| over the grid, mu_hat by closed form
// when available and quadrature otherwise.
ProxyReport resolvent_growth_proxy(const kernels::MemoryKernel& k,
                                   std::vector<double> lambda_grid,
                                   const oscquad::QuadConfig& cfg = {});

struct ModeParams {
    double alpha = 1.0;  // stiffness of this mode, > 0
    kernels::MemoryKernel kernel;
    std::function<double(double)> history;  // u(-s) for s > 0; empty means 0
    double u0 = 0.0;
    double v0 = 0.0;
};

struct TrajectorySample {
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    double energy = 0.0;
};

struct ModeTrajectory {
    std::vector<TrajectorySample> samples;  // one per step, t ascending
    double dt = 0.0;
    double kernel_mass = 0.0;  // M = \int_0^inf mu
};

// Implicit-midpoint step; the convolution reads the stored trajectory at the
// time midpoint (initial history for times before 0). The kernel is reduced
// to cell masses g_j around s_j = j dt, truncated where the tail mass drops
// below 1e-8 M, and the recorded energy is
//   E = v^2/2 + alpha u^2/2 + (1/2) sum_j g_j (u(t) - u(t - s_j))^2.
// Preconditions: alpha > 0, dt <= 0.1 * 2 pi / sqrt(alpha + M) (the mode must
// be resolved), kernel nonnegative and summable. Throws InstabilityError when
// |u| exceeds 1e6 times the initial data scale.
ModeTrajectory simulate_mode(const ModeParams& params, double t_max, double dt);

// Runs one mode per alpha with data u0 = 1/alpha, v0 = 0, zero history, all
// sharing dt; forms env(t) = max_alpha sqrt(2 E_alpha(t)) and fits
// log env vs log t on the tail half of [0, t_max]. Returns the decay
// exponent e with env ~ t^{-e}.
double decay_envelope_experiment(const kernels::MemoryKernel& k,
                                 kernels::LimitPair pair,
                                 const std::vector<double>& alphas,
                                 double t_max, double dt);

}  // namespace halfourier::memory
