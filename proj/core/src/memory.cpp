#include "halfourier/memory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "halfourier/numfmt.hpp"
#include "halfourier/specfun.hpp"
#include "quadrature.hpp"

namespace halfourier::memory {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

double checked_mass(const kernels::MemoryKernel& k) {
    if (const auto m = k.total_mass()) {
        if (!std::isfinite(*m))
            throw NotSummableError("kernel mass estimate is not finite");
        return *m;
    }
    auto f = [&k](double s) -> Complex { return k.eval(s); };
    const double a = k.domain_min();
    double T = std::max(1.0, 2.0 * a);
    double acc = detail::adaptive(f, a, T, 1e-12).value.real();
    double prev = kInf;
    for (int i = 0; i < 48; ++i) {
        const double chunk = detail::adaptive(f, T, 2.0 * T, 1e-12).value.real();
        acc += chunk;
        T *= 2.0;
        const double floor = 1e-11 * (std::abs(acc) + 1e-300);
        if (std::abs(chunk) <= floor && prev <= floor) return acc;
        prev = std::abs(chunk);
    }
    throw NotSummableError("kernel mass did not settle under doubling probes");
}

// \int_T^inf mu, by bound when available, else by doubling probes that must
// die away below the resolution floor (1e-12 of the mass).
double tail_mass(const kernels::MemoryKernel& k, double T, double mass) {
    if (const auto b = k.mass_tail_bound(T)) return *b;
    auto f = [&k](double s) -> Complex { return k.eval(s); };
    double acc = 0.0, x = T;
    for (int i = 0; i < 48; ++i) {
        const double chunk =
            std::abs(detail::adaptive(f, x, 2.0 * x, 1e-13 * (mass + 1.0))
                         .value.real());
        acc += chunk;
        x *= 2.0;
        if (chunk <= 1e-12 * (mass + 1e-300)) return acc;
    }
    throw NotSummableError("kernel tail mass did not settle");
}

double find_s_max(const kernels::MemoryKernel& k, double mass, double dt) {
    if (k.domain_max() < kInf) return k.domain_max();
    if (mass <= 0.0) return std::max(dt, 2.0 * k.domain_min());
    const double target = 1e-8 * mass;
    double T = std::max(dt, 2.0 * k.domain_min());
    for (int i = 0; i < 70; ++i) {
        if (tail_mass(k, T, mass) <= target) return T;
        T *= 2.0;
    }
    throw NotSummableError("kernel tail mass stays above the truncation "
                           "threshold 1e-8 M");
}

// Cell masses around s_j = j dt: cell 1 takes (0, 1.5 dt] (graded when the
// kernel metadata carries p > 0), the rest take (s_j - dt/2, s_j + dt/2].
std::vector<double> cell_masses(const kernels::MemoryKernel& k, double dt,
                                double s_max, double mass) {
    const double a0 = k.domain_min();
    const double hi_cap = std::min(s_max, k.domain_max());
    const long J = std::max(1L, static_cast<long>(
                                    std::ceil((hi_cap - 0.5 * dt) / dt)));
    std::vector<double> g(static_cast<std::size_t>(J) + 1, 0.0);
    auto f = [&k](double s) -> Complex { return k.eval(s); };
    const double cell_tol = 1e-13 * (std::abs(mass) + 1.0);

    const double hi1 = std::min(1.5 * dt, k.domain_max());
    if (a0 == 0.0) {
        const auto pair = k.limit_pair();
        const double p = pair ? pair->p : 0.0;
        if (p > 0.0) {
            // u = s^{1-p} flattens the endpoint blow-up: the transformed
            // integrand is s^p f(s) / (1-p), bounded near u = 0.
            const double grade = 1.0 / (1.0 - p);
            auto flat = [&k, p, grade](double u) -> Complex {
                const double s = std::pow(u, grade);
                return k.eval(s) * grade * std::pow(u, p * grade);
            };
            g[1] = detail::adaptive(flat, 0.0, std::pow(hi1, 1.0 - p),
                                    cell_tol)
                       .value.real();
        } else {
            g[1] = detail::adaptive(f, 0.0, hi1, cell_tol).value.real();
        }
    } else if (a0 < hi1) {
        g[1] = detail::adaptive(f, a0, hi1, cell_tol).value.real();
    }
    for (long j = 2; j <= J; ++j) {
        const double lo = std::max((j - 0.5) * dt, a0);
        const double hi = std::min((j + 0.5) * dt, k.domain_max());
        if (lo < hi)
            g[static_cast<std::size_t>(j)] =
                detail::adaptive(f, lo, hi, cell_tol).value.real();
    }

    for (std::size_t j = 1; j < g.size(); ++j) {
        if (g[j] < -1e-10 * (std::abs(mass) + 1.0))
            throw KernelValidationError(
                "simulation needs a nonnegative kernel; mass of the cell at "
                "s=" + format_double(double(j) * dt) + " is negative");
        g[j] = std::max(g[j], 0.0);
    }
    return g;
}

}  // namespace

DecayForecast decay_forecast(kernels::LimitPair pair) {
    if (!(pair.p >= 0.0 && pair.p < 1.0))
        throw std::domain_error("decay_forecast needs p in [0, 1)");
    if (!(pair.ell > 0.0))
        throw std::domain_error("decay_forecast needs ell > 0");
    DecayForecast f;
    f.pair = pair;
    f.resolvent_exponent = 2.0 - pair.p;
    f.decay_exponent = 1.0 / (2.0 - pair.p);
    f.optimal_at_p0 = pair.p == 0.0;
    return f;
}

ProxyReport resolvent_growth_proxy(const kernels::MemoryKernel& k,
                                   std::vector<double> lambda_grid,
                                   const oscquad::QuadConfig& cfg) {
    std::sort(lambda_grid.begin(), lambda_grid.end());
    ProxyReport report;
    for (double lambda : lambda_grid) {
        if (!(lambda > 0.0))
            throw std::invalid_argument("resolvent proxy needs lambda > 0");
        Complex mu;
        if (const auto cf = k.closed_form_transform(lambda)) {
            mu = *cf;
        } else {
            mu = oscquad::half_fourier(k, std::nullopt, lambda, cfg).value;
        }
        const double a = std::abs(mu);
        if (a == 0.0) continue;
        report.rows.push_back({lambda, lambda / a});
    }

    std::vector<double> xs, ys;
    for (const auto& row : report.rows) {
        xs.push_back(std::log(row.lambda));
        ys.push_back(std::log(row.g));
    }
    report.fitted_exponent =
        xs.size() >= 2 ? detail::fit_line(xs, ys).slope : 0.0;

    if (const auto pair = k.limit_pair();
        pair && pair->ell > 0.0 && pair->p >= 0.0 && pair->p < 1.0)
        report.predicted_prefactor =
            1.0 / (pair->ell * specfun::gamma_real(1.0 - pair->p));
    return report;
}

ModeTrajectory simulate_mode(const ModeParams& params, double t_max, double dt) {
    if (!(params.alpha > 0.0))
        throw std::invalid_argument("simulate_mode needs alpha > 0");
    if (!(t_max > 0.0) || !(dt > 0.0))
        throw std::invalid_argument("simulate_mode needs t_max > 0 and dt > 0");

    const double M = checked_mass(params.kernel);
    const double rule = 0.1 * kTwoPi / std::sqrt(params.alpha + std::max(M, 0.0));
    if (dt > rule * (1.0 + 1e-12))
        throw std::invalid_argument(
            "dt=" + format_double(dt) + " does not resolve the mode; need dt <= "
            "0.1*2*pi/sqrt(alpha+M) = " + format_double(rule));

    const double s_max = find_s_max(params.kernel, M, dt);
    const std::vector<double> g = cell_masses(params.kernel, dt, s_max, M);
    const long J = static_cast<long>(g.size()) - 1;

    double G = 0.0;
    for (double gj : g) G += gj;
    const double K = params.alpha + G;

    const long N = std::lround(t_max / dt);
    std::vector<double> u(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(N) + 1, 0.0);
    std::vector<double> hist(static_cast<std::size_t>(J) + 1, 0.0);
    if (params.history)
        for (long j = 1; j <= J; ++j)
            hist[static_cast<std::size_t>(j)] = params.history(double(j) * dt);

    u[0] = params.u0;
    v[0] = params.v0;
    auto at = [&](long m) {
        return m >= 0 ? u[static_cast<std::size_t>(m)]
                      : hist[static_cast<std::size_t>(-m)];
    };

    double scale0 = std::max(std::abs(params.u0), std::abs(params.v0));
    for (long j = 1; j <= J; ++j)
        scale0 = std::max(scale0, std::abs(hist[static_cast<std::size_t>(j)]));
    const double guard = 1e6 * std::max(scale0, 1e-12);

    auto energy = [&](long n) {
        double h = 0.0;
        for (long j = 1; j <= J; ++j) {
            const double d = at(n) - at(n - j);
            h += g[static_cast<std::size_t>(j)] * d * d;
        }
        return 0.5 * v[static_cast<std::size_t>(n)] * v[static_cast<std::size_t>(n)] +
               0.5 * params.alpha * at(n) * at(n) + 0.5 * h;
    };

    ModeTrajectory traj;
    traj.dt = dt;
    traj.kernel_mass = M;
    traj.samples.reserve(static_cast<std::size_t>(N) + 1);
    traj.samples.push_back({0.0, u[0], v[0], energy(0)});

    for (long n = 0; n < N; ++n) {
        double F = 0.0;
        for (long j = 1; j <= J; ++j)
            F += g[static_cast<std::size_t>(j)] * 0.5 * (at(n + 1 - j) + at(n - j));
        const double ubar = (2.0 * at(n) + dt * v[static_cast<std::size_t>(n)] +
                             0.5 * dt * dt * F) /
                            (2.0 + 0.5 * dt * dt * K);
        u[static_cast<std::size_t>(n + 1)] = 2.0 * ubar - at(n);
        v[static_cast<std::size_t>(n + 1)] =
            v[static_cast<std::size_t>(n)] - dt * (K * ubar - F);

        const double un = u[static_cast<std::size_t>(n + 1)];
        if (!(std::abs(un) <= guard))
            throw InstabilityError(
                "mode amplitude " + format_double(un) + " exceeded 1e6 x the "
                "initial scale at t=" + format_double(double(n + 1) * dt),
                double(n + 1) * dt, un);
        traj.samples.push_back({double(n + 1) * dt, un,
                                v[static_cast<std::size_t>(n + 1)],
                                energy(n + 1)});
    }
    return traj;
}

double decay_envelope_experiment(const kernels::MemoryKernel& k,
                                 kernels::LimitPair pair,
                                 const std::vector<double>& alphas,
                                 double t_max, double dt) {
    if (alphas.empty())
        throw std::invalid_argument("envelope experiment needs at least one alpha");
    for (double a : alphas)
        if (!(a > 0.0))
            throw std::invalid_argument("envelope experiment needs alpha > 0");
    if (!(pair.p >= 0.0 && pair.p < 1.0))
        throw std::domain_error("envelope experiment needs p in [0, 1)");

    std::vector<ModeTrajectory> trajs;
    trajs.reserve(alphas.size());
    for (double a : alphas)
        trajs.push_back(
            simulate_mode({a, k, nullptr, 1.0 / a, 0.0}, t_max, dt));

    std::size_t count = trajs.front().samples.size();
    for (const auto& t : trajs) count = std::min(count, t.samples.size());

    std::vector<double> xs, ys;
    for (std::size_t i = 1; i < count; ++i) {
        const double t = trajs.front().samples[i].t;
        if (t < 0.5 * t_max) continue;
        double env = 0.0;
        for (const auto& tr : trajs)
            env = std::max(env, std::sqrt(2.0 * tr.samples[i].energy));
        if (!(env > 0.0)) continue;
        xs.push_back(std::log(t));
        ys.push_back(std::log(env));
    }
    if (xs.size() < 2)
        throw std::runtime_error(
            "envelope experiment has fewer than 2 usable samples in the fit "
            "window; increase t_max");
    return -detail::fit_line(xs, ys).slope;
}

}  // namespace halfourier::memory
