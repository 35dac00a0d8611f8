#include "halfourier/oscquad.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "halfourier/specfun.hpp"
#include "quadrature.hpp"

namespace halfourier::oscquad {

namespace {

// Accumulates pieces of a transform, downgrading to "failed with a best
// estimate" when any piece throws ToleranceNotReached, so the caller still
// receives the assembled value.
struct Accumulator {
    Complex value{0.0, 0.0};
    double err = 0.0;
    long panels = 0;
    bool failed = false;

    void add(const detail::QuadResult& r) {
        value += r.value;
        err += r.err_est;
        panels += r.panels;
    }

    template <typename Fn>
    void piece(Fn&& fn) {
        try {
            add(fn());
        } catch (const ToleranceNotReached& e) {
            value += e.best_estimate();
            err += e.achieved();
            failed = true;
        }
    }
};

// Smallest T with \int_T^inf |f| <= budget, by doubling an analytic bound.
double tail_cutoff_from_bound(const kernels::MemoryKernel& k, double budget) {
    double T = std::max(1.0, k.domain_min() * 2.0);
    for (int i = 0; i < 200; ++i) {
        const auto bound = k.mass_tail_bound(T);
        if (!bound)
            throw NotSummableError("kernel lost its tail bound while searching "
                                   "for a cutoff");
        if (*bound <= budget) return T;
        T *= 2.0;
    }
    throw NotSummableError("kernel tail mass does not fall below tolerance; "
                           "cutoff search gave up at T=" + std::to_string(T));
}

}  // namespace

HalfFourierResult half_fourier(const kernels::MemoryKernel& k,
                               std::optional<kernels::LimitPair> pair,
                               double lambda, const QuadConfig& cfg) {
    if (!(lambda > 0.0)) throw std::invalid_argument("half_fourier needs lambda > 0");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("half_fourier needs tol > 0");
    if (!(cfg.split_point > 0.0))
        throw std::invalid_argument("half_fourier needs split_point > 0");

    if (auto mass = k.total_mass(); mass && !std::isfinite(*mass))
        throw NotSummableError("kernel mass estimate is not finite");

    if (!pair) pair = k.limit_pair();

    auto f = [&k](double s) { return k.eval(s); };
    const double a0 = k.domain_min();

    HalfFourierResult out;
    out.lambda = lambda;
    Accumulator acc;

    double start = a0;
    bool graded_start = a0 > 0.0;

    if (pair && pair->p > 0.0 && a0 == 0.0) {
        const double p = pair->p, ell = pair->ell;
        const double b = cfg.split_point / lambda;

        // model transform over (0, b]:
        //   \int_0^b e^{-i lambda s} s^{-p} ds = lambda^{p-1} * rhs(p, lambda b)
        if (ell != 0.0)
            acc.value +=
                ell * std::pow(lambda, p - 1.0) * lemma2_rhs(p, lambda * b);

        auto remainder = [&](double s) -> Complex {
            const double r = k.eval(s) - ell * std::pow(s, -p);
            const double phase = -lambda * s;
            return r * Complex(std::cos(phase), std::sin(phase));
        };
        acc.piece([&] {
            return detail::graded_panels(remainder, b, p, cfg.tol / 4.0);
        });
        start = b;
        graded_start = true;
    }

    if (k.mass_tail_bound(1.0).has_value()) {
        const double T =
            k.domain_max() < std::numeric_limits<double>::infinity()
                ? k.domain_max()
                : tail_cutoff_from_bound(k, cfg.tol / 4.0);
        out.tail_cutoff = std::max(T, start);
        if (start < T)
            acc.piece([&] {
                return detail::fourier_panels(f, lambda, start, T, cfg.tol / 2.0,
                                              cfg.max_panels, graded_start);
            });
    } else {
        // No analytic tail bound: accumulate doubling chunks until two
        // consecutive chunks are below the tail budget.
        double T = std::max(1.0, start * 2.0);
        acc.piece([&] {
            return detail::fourier_panels(f, lambda, start, T, cfg.tol / 2.0,
                                          cfg.max_panels, graded_start);
        });
        double prev_chunk = std::numeric_limits<double>::infinity();
        bool settled = false;
        for (int i = 0; i < 48 && !settled; ++i) {
            detail::QuadResult chunk = detail::fourier_panels(
                f, lambda, T, 2.0 * T, cfg.tol / 8.0, cfg.max_panels);
            acc.add(chunk);
            const double size = std::abs(chunk.value);
            settled = size <= cfg.tol / 8.0 && prev_chunk <= cfg.tol / 8.0;
            prev_chunk = size;
            T *= 2.0;
        }
        if (!settled)
            throw NotSummableError(
                "kernel tail contributions did not settle; the kernel looks "
                "non-summable out to T=" + std::to_string(T));
        out.tail_cutoff = T;
    }

    out.value = acc.value;
    out.err_est = acc.err;
    out.panels_used = acc.panels;
    if (acc.failed)
        throw ToleranceNotReached(
            "half_fourier: a component integral missed its tolerance at "
            "lambda=" + std::to_string(lambda),
            out.value, out.err_est);
    return out;
}

Complex lemma2_lhs(double p, double lambda, double beta, double tol) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("lemma2_lhs needs p in (0, 1)");
    if (!(lambda > 0.0 && beta > 0.0))
        throw std::invalid_argument("lemma2_lhs needs lambda > 0 and beta > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("lemma2_lhs needs tol > 0");

    // u = s^{1-p}:  lambda^{1-p} \int_0^{beta/lambda} e^{-i lambda s} s^{-p} ds
    //             = (lambda^{1-p} / (1-p)) \int_0^U e^{-i lambda u^m} du,
    // m = 1/(1-p), U = (beta/lambda)^{1-p}. The substituted integrand is
    // bounded, so plain adaptive bisection applies.
    const double m = 1.0 / (1.0 - p);
    const double U = std::pow(beta / lambda, 1.0 - p);
    const double scale = std::pow(lambda, 1.0 - p) / (1.0 - p);

    auto g = [lambda, m](double u) -> Complex {
        const double phase = -lambda * std::pow(u, m);
        return Complex(std::cos(phase), std::sin(phase));
    };
    const auto r = detail::adaptive(g, 0.0, U, tol / scale);
    return scale * r.value;
}

Complex lemma2_rhs(double p, double beta) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::invalid_argument("lemma2_rhs needs p in [0, 1)");
    if (!(beta > 0.0)) throw std::invalid_argument("lemma2_rhs needs beta > 0");

    const Complex m_p = specfun::asymp_constant(p);
    const Complex boundary =
        Complex(0.0, 1.0) * std::exp(Complex(0.0, -beta)) / std::pow(beta, p);
    if (p == 0.0) return m_p + boundary;

    const Complex tail = specfun::tail_integral(1.0 + p, beta);
    return m_p + boundary - Complex(0.0, p / std::pow(beta, p)) * tail;
}

}  // namespace halfourier::oscquad
