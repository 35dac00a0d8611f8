#pragma once

// Memory kernels: nonnegative, summable weights mu(s) on (0, inf) with an
// optional algebraic singularity at the origin. A kernel is an immutable
// expression tree (closed forms, sample tables, callables, scales, sums);
// evaluation and analysis functions walk the tree.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "halfourier/errors.hpp"

namespace halfourier::kernels {

// Singular behaviour at the origin: s^p * f(s) -> ell as s -> 0+.
struct LimitPair {
    double p = 0.0;   // in [0, 1)
    double ell = 0.0;
};

class MemoryKernel {
public:
    // e^{-delta s}
    static MemoryKernel exponential(double delta);
    // s^{-p} e^{-delta s}
    static MemoryKernel singular_exponential(double p, double delta);
    // linear interpolation of (s, value) samples; s strictly increasing, > 0
    static MemoryKernel tabulated(std::vector<std::pair<double, double>> samples,
                                  std::string source_path = {});
    // arbitrary evaluation/derivative rules; transforms are unavailable
    static MemoryKernel composite(std::function<double(double)> value,
                                  std::function<double(double)> deriv,
                                  std::optional<LimitPair> pair = std::nullopt);
    static MemoryKernel scaled(double c, MemoryKernel k);
    static MemoryKernel sum(MemoryKernel a, MemoryKernel b);

    double eval(double s) const;
    double eval_deriv(double s) const;

    // (p, ell) metadata when the tree determines it (closed forms and their
    // scales/sums); empty for tables and unannotated composites.
    std::optional<LimitPair> limit_pair() const;

    // evaluable range: (0, inf) for closed forms, the sample span for tables
    double domain_min() const;
    double domain_max() const;

    // Analytic upper bounds for \int_T^inf |f| and \int_T^inf |f'|, when the
    // tree supports them. Tables integrate their remaining samples; callables
    // yield nothing and callers fall back to probing.
    std::optional<double> mass_tail_bound(double T) const;
    std::optional<double> deriv_tail_bound(double T) const;

    // \int_0^inf f in closed form (exp/singexp trees and tables)
    std::optional<double> total_mass() const;

    // mu_hat(lambda) = \int_0^inf e^{-i lambda s} mu(s) ds when the tree is
    // built from exponential / singular-exponential leaves:
    //   exp(delta)        -> 1 / (delta + i lambda)
    //   singexp(p, delta) -> Gamma(1-p) * (delta + i lambda)^{p-1}
    // (principal branch), extended linearly over scale and sum.
    std::optional<Complex> closed_form_transform(double lambda) const;

    // Kernel text in the input grammar, when the tree is expressible there.
    std::optional<std::string> render() const;

    struct Node;  // expression-tree node, defined in kernels.cpp

private:
    explicit MemoryKernel(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// Grammar:
//   exp(delta=<float>) | singexp(p=<float>,delta=<float>) | table:<path>
//   | scale(<float>,<kernel>) | sum(<kernel>,<kernel>)
// Whitespace is permitted between tokens. Table paths run to the next
// ',' / ')' or end of input. Throws KernelParseError (with position),
// TableFileError, or KernelValidationError.
MemoryKernel parse_kernel(std::string_view text);

inline std::optional<std::string> render_kernel(const MemoryKernel& k) {
    return k.render();
}

inline std::optional<Complex> closed_form_transform(const MemoryKernel& k,
                                                    double lambda) {
    return k.closed_form_transform(lambda);
}

// Largest delta with mu' + delta * mu <= 0 at every grid point
// (infimum of -mu'/mu); 0 when the condition fails somewhere.
double check_dafermos(const MemoryKernel& k, const std::vector<double>& grid);

struct IdentifyRow {
    double s = 0.0;
    double value = 0.0;
    double fitted = 0.0;
};

struct IdentifyResult {
    LimitPair pair;                  // p clamped to [0, 1)
    double residual = 0.0;           // rms misfit of log f
    std::vector<IdentifyRow> rows;   // per-sample diagnostics
};

// Least-squares fit of log f ~ log ell - p log s on a log-spaced grid of n
// points in [s_min, s_max]. Throws std::domain_error on nonpositive kernel
// values and std::invalid_argument on a degenerate grid.
IdentifyResult identify_limit(const MemoryKernel& k, double s_min, double s_max,
                              int n);

// omega_p(s) = sup_{t in (0, s]} |t^p f(t) - ell|, estimated as a grid
// supremum with doubling refinement until the value moves < 1%.
double omega_p(const MemoryKernel& k, LimitPair pair, double s, int n = 64);

// The same estimate packaged as a reusable modulus-of-continuity function.
struct ModulusOfContinuity {
    std::function<double(double)> eval;
    double operator()(double s) const { return eval(s); }
};

ModulusOfContinuity omega_function(const MemoryKernel& k, LimitPair pair,
                                   int n = 64);

// Products x^p * \int_x^inf |f'(s)| ds for a decreasing sequence of x.
// Bounded products back the derivative-mass condition; growth as x -> 0
// flags its failure. Throws NotSummableError when |f'| has no finite tail.
std::vector<std::pair<double, double>> check_condition_AA(
    const MemoryKernel& k, LimitPair pair, const std::vector<double>& xs);

}  // namespace halfourier::kernels
