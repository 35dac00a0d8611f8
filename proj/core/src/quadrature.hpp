#pragma once

// Shared quadrature machinery. Everything here is deterministic: fixed node
// tables, fixed refinement ladders, no randomness, no time dependence.

#include <functional>
#include <vector>

#include "halfourier/errors.hpp"

namespace halfourier::detail {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1), symmetric
    std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule of order n, computed once by Newton iteration on P_n.
const GaussRule& gauss_rule(int n);

struct QuadResult {
    Complex value{};
    double err_est = 0.0;   // refinement delta, not a rigorous bound
    long panels = 0;
};

using RealFn = std::function<double(double)>;
using ComplexFn = std::function<Complex(double)>;

// Globally adaptive bisection with a two-level Gauss-Legendre estimate per
// panel. abs_tol is an absolute tolerance on the whole interval.
QuadResult adaptive(const ComplexFn& f, double a, double b, double abs_tol,
                    long max_panels = 1L << 20);

// Integral of f(s) * exp(-i*omega*s) over [a, b] for real f, resolved by
// panels no wider than a half oscillation period. When graded_left is set
// the mesh is geometrically refined toward a, which keeps fixed-order panels
// accurate for integrands that steepen like a power of the distance to the
// origin (a > 0 required in that case). Error estimate ladder: order bump
// (11 -> 15 nodes), then panel doubling until the delta drops under abs_tol.
QuadResult fourier_panels(const RealFn& f, double omega, double a, double b,
                          double abs_tol, long max_panels,
                          bool graded_left = false);

// Integral of g over (0, b] on a mesh graded like t_j = (j/n)^{1/(1-p)} * b,
// which equidistributes the mass of an s^{-p} endpoint singularity. g is
// never evaluated at 0. Refines by doubling the cell count.
QuadResult graded_panels(const ComplexFn& g, double b, double p,
                         double abs_tol, long max_cells = 1L << 16);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

// Ordinary least squares for y = slope*x + intercept.
LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace halfourier::detail
