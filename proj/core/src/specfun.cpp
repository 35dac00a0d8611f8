#include "halfourier/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace halfourier::specfun {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

double lanczos_gamma(double x) {
    // Valid for x >= 0.5; callers shift smaller arguments up by recurrence.
    const double z = x - 1.0;
    double a = kLanczos[0];
    for (int k = 1; k < 9; ++k) a += kLanczos[k] / (z + k);
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) *
           std::exp(-t) * a;
}

// Remaining tail past T, one integration by parts deep:
// |\int_T^inf e^{-i beta s} s^{-q} ds| <= 2 T^{-q} / beta  (q > 0, beta > 0).
double tail_remainder_bound(double q, double beta, double T) {
    return 2.0 * std::pow(T, -q) / beta;
}

// Shared worker; q = 0 is allowed here and yields the improper-integral
// value exactly (the recursion coefficient vanishes after one step).
Complex tail_integral_impl(double q, double beta, double tol) {
    const Complex unit_boundary =
        Complex(0.0, -1.0) * std::exp(Complex(0.0, -beta)) / beta;

    Complex boundary = 0.0;
    Complex coef = 1.0;
    double qk = q;
    while (qk <= 3.0) {
        boundary += coef * unit_boundary;
        coef *= Complex(0.0, qk / beta);
        qk += 1.0;
        if (coef == Complex(0.0)) return boundary;
    }

    const double cmag = std::abs(coef);
    const double budget = tol / cmag;
    double T = std::pow(4.0 / (beta * budget), 1.0 / qk);
    if (T <= 1.0) return boundary;  // remainder already below budget at T = 1

    const long max_panels = 1L << 22;
    detail::QuadResult quad;
    try {
        quad = detail::fourier_panels([qk](double s) { return std::pow(s, -qk); },
                                      beta, 1.0, T, 0.5 * budget, max_panels);
    } catch (const ToleranceNotReached& e) {
        throw ToleranceNotReached(
            "tail integral quadrature stalled",
            boundary + coef * e.best_estimate(),
            cmag * (e.achieved() + tail_remainder_bound(qk, beta, T)));
    }

    const double achieved =
        cmag * (quad.err_est + tail_remainder_bound(qk, beta, T));
    const Complex value = boundary + coef * quad.value;
    if (achieved > tol)
        throw ToleranceNotReached("tail integral tolerance not met", value,
                                  achieved);
    return value;
}

}  // namespace

double gamma_real(double x) {
    if (!(x > 0.0))
        throw std::domain_error("gamma_real requires x > 0");
    if (x >= 0.5) return lanczos_gamma(x);
    return lanczos_gamma(x + 1.0) / x;
}

Complex asymp_constant(double p) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("asymp_constant requires p in [0, 1)");
    const double phi = 0.5 * std::numbers::pi * p;
    return gamma_real(1.0 - p) * Complex(std::sin(phi), -std::cos(phi));
}

Complex tail_integral(double q, double beta, double tol) {
    if (!(q > 0.0 && q < 4.0))
        throw std::domain_error("tail_integral requires q in (0, 4)");
    if (!(beta > 0.0)) throw std::domain_error("tail_integral requires beta > 0");
    if (!(tol > 0.0)) throw std::domain_error("tail_integral requires tol > 0");
    return tail_integral_impl(q, beta, tol);
}

Complex mp_by_quadrature(double p, double tol) {
    if (!(p >= 0.0 && p < 1.0))
        throw std::domain_error("mp_by_quadrature requires p in [0, 1)");
    if (!(tol > 0.0)) throw std::domain_error("mp_by_quadrature requires tol > 0");

    Complex head;
    if (p == 0.0) {
        head = detail::adaptive(
                   [](double s) { return std::exp(Complex(0.0, -s)); }, 0.0, 1.0,
                   tol / 3.0)
                   .value;
    } else {
        // u = s^{1-p} maps the singular head onto a bounded integrand.
        const double m = 1.0 / (1.0 - p);
        auto g = [m](double u) { return std::exp(Complex(0.0, -std::pow(u, m))); };
        head = detail::adaptive(g, 0.0, 1.0, tol * (1.0 - p) / 3.0).value * m;
    }
    return head + tail_integral_impl(p, 1.0, tol / 3.0);
}

}  // namespace halfourier::specfun
