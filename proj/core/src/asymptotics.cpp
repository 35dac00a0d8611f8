#include "halfourier/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "halfourier/specfun.hpp"
#include "quadrature.hpp"

namespace halfourier::asymptotics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// \int_a^inf e^{-i lambda s} g(s) ds, truncated where an analytic tail bound
// drops below budget/4; without a bound, doubling chunks must die away.
detail::QuadResult oscillatory_to_infinity(
    const detail::RealFn& g,
    const std::function<std::optional<double>(double)>& tail_bound,
    double domain_max, double lambda, double a, double budget,
    bool graded_left) {
    double T = std::max(1.0, 2.0 * a);
    if (domain_max < kInf) {
        T = domain_max;
    } else if (tail_bound(T).has_value()) {
        int i = 0;
        for (; i < 200 && *tail_bound(T) > budget / 4.0; ++i) T *= 2.0;
        if (i == 200)
            throw NotSummableError("tail bound never fell below tolerance");
    } else {
        detail::QuadResult acc = detail::fourier_panels(
            g, lambda, a, T, budget / 2.0, 1L << 22, graded_left);
        double prev = kInf;
        for (int i = 0; i < 48; ++i) {
            const auto chunk = detail::fourier_panels(g, lambda, T, 2.0 * T,
                                                      budget / 8.0, 1L << 22);
            acc.value += chunk.value;
            acc.err_est += chunk.err_est;
            acc.panels += chunk.panels;
            T *= 2.0;
            const double size = std::abs(chunk.value);
            if (size <= budget / 8.0 && prev <= budget / 8.0) return acc;
            prev = size;
        }
        throw NotSummableError("tail contributions did not settle");
    }
    if (a >= T) return {};
    return detail::fourier_panels(g, lambda, a, T, budget / 2.0, 1L << 22,
                                  graded_left);
}

double metadata_p(const kernels::MemoryKernel& k) {
    const auto pair = k.limit_pair();
    return pair ? pair->p : 0.0;
}

}  // namespace

AsymptoteReport verify_theorem1(const kernels::MemoryKernel& k,
                                kernels::LimitPair pair,
                                std::vector<double> lambda_grid,
                                const oscquad::QuadConfig& cfg,
                                bool use_closed_form) {
    std::sort(lambda_grid.begin(), lambda_grid.end());

    AsymptoteReport report;
    report.pair = pair;
    report.target = pair.ell * specfun::asymp_constant(pair.p);

    for (double lambda : lambda_grid) {
        AsymptoteRow row;
        row.lambda = lambda;
        const double scale = std::pow(lambda, 1.0 - pair.p);

        Complex value;
        if (const auto cf = k.closed_form_transform(lambda);
            use_closed_form && cf) {
            value = *cf;
        } else {
            try {
                value = oscquad::half_fourier(k, pair, lambda, cfg).value;
            } catch (const ToleranceNotReached& e) {
                value = e.best_estimate();
                row.converged = false;
                row.note = e.what();
            }
        }
        row.scaled = scale * value;
        row.deviation = std::abs(row.scaled - report.target);
        report.rows.push_back(std::move(row));
    }

    // Deviations at the roundoff floor carry no rate information.
    std::vector<double> xs, ys;
    for (const auto& row : report.rows) {
        if (!row.converged) continue;
        if (row.deviation < 100.0 * std::numeric_limits<double>::epsilon())
            continue;
        xs.push_back(std::log(row.lambda));
        ys.push_back(std::log(row.deviation));
    }
    report.fitted_slope =
        xs.size() >= 2 ? detail::fit_line(xs, ys).slope : 0.0;
    return report;
}

double check_lemma1(const kernels::MemoryKernel& k, double lambda, double alpha,
                    double tol) {
    if (!(lambda > 0.0 && alpha > 0.0))
        throw std::invalid_argument("check_lemma1 needs lambda > 0, alpha > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("check_lemma1 needs tol > 0");

    const double p = metadata_p(k);
    const double scale = std::pow(lambda, 1.0 - p);
    const double half = 3.141592653589793238462643383279502884 / lambda;
    auto f = [&k](double s) { return k.eval(s); };
    auto df = [&k](double s) { return k.eval_deriv(s); };
    auto mass_bound = [&k](double T) { return k.mass_tail_bound(T); };
    auto deriv_bound = [&k](double T) { return k.deriv_tail_bound(T); };
    const double dmax = k.domain_max();

    const Complex lhs =
        scale * oscillatory_to_infinity(f, mass_bound, dmax, lambda, alpha,
                                        tol / 2.0, true)
                    .value;

    const Complex i(0.0, 1.0);
    const Complex half_f =
        detail::fourier_panels(f, lambda, alpha, alpha + half, tol / 8.0,
                               1L << 20)
            .value;
    const Complex phase = std::exp(Complex(0.0, -lambda * alpha));
    const Complex bracket = (i * phase / (2.0 * std::pow(lambda, p))) *
                            (k.eval(alpha + half) - k.eval(alpha));
    const Complex df_all =
        oscillatory_to_infinity(df, deriv_bound, dmax, lambda, alpha,
                                tol / 2.0, true)
            .value;
    const Complex half_df =
        detail::fourier_panels(df, lambda, alpha, alpha + half, tol / 8.0,
                               1L << 20)
            .value;

    const Complex rhs = 0.5 * scale * half_f + bracket -
                        (i / std::pow(lambda, p)) * df_all +
                        (i / (2.0 * std::pow(lambda, p))) * half_df;
    return std::abs(lhs - rhs);
}

double check_p0_formula(const kernels::MemoryKernel& k, double ell,
                        double lambda, double tol) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("check_p0_formula needs lambda > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("check_p0_formula needs tol > 0");
    if (k.domain_min() > 0.0)
        throw std::invalid_argument(
            "check_p0_formula needs a kernel evaluable down to 0");

    const double half = 3.141592653589793238462643383279502884 / lambda;
    auto f = [&k](double s) { return k.eval(s); };
    auto df = [&k](double s) { return k.eval_deriv(s); };
    auto mass_bound = [&k](double T) { return k.mass_tail_bound(T); };
    auto deriv_bound = [&k](double T) { return k.deriv_tail_bound(T); };
    const double dmax = k.domain_max();

    const Complex lhs =
        lambda * oscillatory_to_infinity(f, mass_bound, dmax, lambda, 0.0,
                                         tol / 2.0, false)
                     .value;

    const Complex i(0.0, 1.0);
    const Complex term1 =
        0.5 * lambda *
        detail::fourier_panels(f, lambda, 0.0, half, tol / 8.0, 1L << 20).value;
    const Complex term2 = 0.5 * i * (k.eval(half) - ell);
    const Complex term3 =
        -i * oscillatory_to_infinity(df, deriv_bound, dmax, lambda, 0.0,
                                     tol / 2.0, false)
                 .value;
    const Complex term4 =
        0.5 * i *
        detail::fourier_panels(df, lambda, 0.0, half, tol / 8.0, 1L << 20).value;

    return std::abs(lhs - (term1 + term2 + term3 + term4));
}

double BetaSchedule::beta_at(double lambda) const {
    double n = 0.0;
    for (const auto& [ln, bn] : breakpoints) {
        if (ln > lambda) break;
        n = bn;
    }
    return n;
}

BetaSchedule build_beta_schedule(const kernels::ModulusOfContinuity& omega,
                                 int n_max) {
    if (n_max < 1)
        throw std::invalid_argument("build_beta_schedule needs n_max >= 1");

    constexpr double kCap = 1e18;
    BetaSchedule schedule;
    double prev = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double floor_n = std::max(double(n) * n, prev + 1.0);
        const double target = 1.0 / (double(n) * n);
        auto ok = [&](double lam) { return omega(n / lam) <= target; };

        double lam;
        if (ok(floor_n)) {
            lam = floor_n;
        } else {
            double lo = floor_n, hi = floor_n;
            while (!ok(hi)) {
                hi *= 2.0;
                if (hi > kCap)
                    throw std::runtime_error(
                        "build_beta_schedule: no admissible lambda_" +
                        std::to_string(n) +
                        " below 1e18; omega does not vanish at 0");
                lo = hi / 2.0;
            }
            // keep the feasible side; omega nondecreasing makes ok monotone
            for (int i = 0; i < 200 && hi - lo > 1e-9 * hi; ++i) {
                const double mid = 0.5 * (lo + hi);
                (ok(mid) ? hi : lo) = mid;
            }
            lam = hi;
        }
        schedule.breakpoints.emplace_back(lam, n);
        prev = lam;
    }
    return schedule;
}

Decomposition decompose(const kernels::MemoryKernel& k, kernels::LimitPair pair,
                        double lambda, double beta,
                        const oscquad::QuadConfig& cfg) {
    if (!(pair.p > 0.0 && pair.p < 1.0))
        throw std::invalid_argument("decompose needs p in (0, 1)");
    if (!(lambda > 0.0 && beta > 0.0))
        throw std::invalid_argument("decompose needs lambda > 0, beta > 0");

    const double p = pair.p, ell = pair.ell;
    const double scale = std::pow(lambda, 1.0 - p);
    const double b = beta / lambda;

    Decomposition d;
    d.lambda = lambda;
    d.beta = beta;

    d.I1 = ell * oscquad::lemma2_lhs(p, lambda, beta, cfg.tol);

    auto remainder = [&](double s) -> Complex {
        const double r = k.eval(s) - ell * std::pow(s, -p);
        const double phase = -lambda * s;
        return r * Complex(std::cos(phase), std::sin(phase));
    };
    d.I2 = scale * detail::graded_panels(remainder, b, p, cfg.tol / scale).value;

    auto f = [&k](double s) { return k.eval(s); };
    auto mass_bound = [&k](double T) { return k.mass_tail_bound(T); };
    d.I3 = scale * oscillatory_to_infinity(f, mass_bound, k.domain_max(),
                                           lambda, b, cfg.tol / scale, true)
                       .value;
    return d;
}

}  // namespace halfourier::asymptotics
