// Acceptance gate for the library: twelve criteria, each with pinned
// tolerances and a wall-clock budget, one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "halfourier/asymptotics.hpp"
#include "halfourier/cli_app.hpp"
#include "halfourier/kernels.hpp"
#include "halfourier/memory.hpp"
#include "halfourier/oscquad.hpp"
#include "halfourier/specfun.hpp"

namespace {

using halfourier::Complex;
namespace hf = halfourier;

constexpr double kPi = 3.14159265358979323846;

class Checker {
  public:
    void require(bool ok, const std::string& what) {
        if (!ok) failures_.push_back(what);
    }
    const std::vector<std::string>& failures() const { return failures_; }

  private:
    std::vector<std::string> failures_;
};

std::string num(double x) {
    std::ostringstream s;
    s.precision(6);
    s << x;
    return s.str();
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
    return g;
}

double worst_energy_rise(const hf::memory::ModeTrajectory& traj) {
    double worst = 0.0;
    for (std::size_t i = 1; i < traj.samples.size(); ++i)
        worst = std::max(
            worst, traj.samples[i].energy - traj.samples[i - 1].energy);
    return worst;
}

// 1. |m(p)| = Gamma(1-p) and arg m(p) = p pi/2 - pi/2 on a 20-point grid.
void crit_limit_constant(Checker& c) {
    for (int i = 0; i < 20; ++i) {
        const double p = 0.05 * i;
        const Complex m = hf::specfun::asymp_constant(p);
        const double mod_ref = std::tgamma(1.0 - p);
        const double arg_ref = p * kPi / 2.0 - kPi / 2.0;
        c.require(std::abs(std::abs(m) - mod_ref) <= 1e-12 * mod_ref,
                  "modulus off at p=" + num(p));
        c.require(std::abs(std::arg(m) - arg_ref) <= 1e-12,
                  "argument off at p=" + num(p));
    }
}

// 2. mp_by_quadrature within 1e-8 of asymp_constant (1e-6 at p = 0.9).
void crit_constant_vs_quadrature(Checker& c) {
    const std::vector<std::pair<double, double>> cases{
        {0.0, 1e-8}, {0.25, 1e-8}, {0.5, 1e-8}, {0.75, 1e-8}, {0.9, 1e-6}};
    for (const auto& [p, tol] : cases) {
        const double diff = std::abs(hf::specfun::mp_by_quadrature(p) -
                                     hf::specfun::asymp_constant(p));
        c.require(diff <= tol, "diff " + num(diff) + " > " + num(tol) +
                                   " at p=" + num(p));
    }
}

// 3. |lemma2_lhs - lemma2_rhs| < 1e-9 on the full lambda x beta x p grid.
void crit_window_identity(Checker& c) {
    for (double lambda : {0.5, 1.0, 5.0, 20.0})
        for (double beta : {0.5, 1.0, 3.0, 10.0})
            for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double r =
                    std::abs(hf::oscquad::lemma2_lhs(p, lambda, beta) -
                             hf::oscquad::lemma2_rhs(p, beta));
                c.require(r < 1e-9, "residual " + num(r) + " at p=" + num(p) +
                                        " lambda=" + num(lambda) +
                                        " beta=" + num(beta));
            }
}

// 4. Shift/parts identity residual < 1e-7 across kernels, lambda, alpha.
void crit_shift_parts_identity(Checker& c) {
    const std::vector<std::string> kernels{"exp(delta=1)",
                                           "singexp(p=0.5,delta=1)"};
    for (const auto& text : kernels) {
        const auto k = hf::kernels::parse_kernel(text);
        for (double lambda : {1.0, 5.0, 20.0})
            for (double alpha : {0.1, 0.3, 2.0}) {
                const double r =
                    hf::asymptotics::check_lemma1(k, lambda, alpha);
                c.require(r < 1e-7, text + ": residual " + num(r) +
                                        " at lambda=" + num(lambda) +
                                        " alpha=" + num(alpha));
            }
    }
}

// 5. exp(delta=1): deviation is exactly 1/sqrt(1+lambda^2); computed rows
// match within 1e-8 and the log-log slope is -1 +- 0.02.
void crit_exponential_scaled_limit(Checker& c) {
    const auto k = hf::kernels::MemoryKernel::exponential(1.0);
    const auto report = hf::asymptotics::verify_theorem1(
        k, *k.limit_pair(), log_grid(1e2, 1e5, 20));
    c.require(report.rows.size() == 20, "expected 20 rows");
    for (const auto& row : report.rows) {
        const double analytic =
            1.0 / std::sqrt(1.0 + row.lambda * row.lambda);
        c.require(row.converged,
                  "row not converged at lambda=" + num(row.lambda));
        c.require(std::abs(row.deviation - analytic) <= 1e-8,
                  "deviation off by " +
                      num(std::abs(row.deviation - analytic)) +
                      " at lambda=" + num(row.lambda));
    }
    c.require(std::abs(report.fitted_slope + 1.0) <= 0.02,
              "slope " + num(report.fitted_slope) + " not in -1 +- 0.02");
}

// 6. singexp(p, delta=1), quadrature path: slope -1 +- 0.1 and final
// deviation < 1e-2 |m(p)| at lambda = 1e5.
void crit_singular_scaled_limit(Checker& c) {
    for (double p : {0.25, 0.5, 0.75}) {
        const auto k = hf::kernels::MemoryKernel::singular_exponential(p, 1.0);
        const auto report = hf::asymptotics::verify_theorem1(
            k, *k.limit_pair(), log_grid(1e2, 1e5, 12), {},
            /*use_closed_form=*/false);
        for (const auto& row : report.rows)
            c.require(row.converged, "p=" + num(p) +
                                         ": quadrature missed tolerance at "
                                         "lambda=" +
                                         num(row.lambda));
        c.require(std::abs(report.fitted_slope + 1.0) <= 0.1,
                  "p=" + num(p) + ": slope " + num(report.fitted_slope));
        const double final_dev = report.rows.back().deviation;
        const double cap = 1e-2 * std::abs(hf::specfun::asymp_constant(p));
        c.require(final_dev < cap, "p=" + num(p) + ": final deviation " +
                                       num(final_dev) + " >= " + num(cap));
    }
}

// 7. identify_limit recovers (p, ell) = (0.5, 1) from samples near 0.
void crit_identification(Checker& c) {
    const auto k = hf::kernels::MemoryKernel::singular_exponential(0.5, 1.0);
    const auto fit = hf::kernels::identify_limit(k, 1e-6, 1e-3, 64);
    c.require(fit.pair.p >= 0.48 && fit.pair.p <= 0.52,
              "p estimate " + num(fit.pair.p) + " outside [0.48, 0.52]");
    c.require(fit.pair.ell >= 0.98 && fit.pair.ell <= 1.02,
              "ell estimate " + num(fit.pair.ell) + " outside [0.98, 1.02]");
}

// 8. Staircase feasibility for omega(s) = 1 - e^{-s} up to n = 50, plus the
// singular-window bound |I2| <= beta omega_p(beta/lambda) / (1-p).
void crit_staircase_and_window_bound(Checker& c) {
    hf::kernels::ModulusOfContinuity omega{
        [](double s) { return 1.0 - std::exp(-s); }};
    const auto schedule = hf::asymptotics::build_beta_schedule(omega, 50);
    c.require(schedule.breakpoints.size() == 50, "expected 50 breakpoints");
    for (const auto& [lambda_n, n] : schedule.breakpoints) {
        c.require(omega(n / lambda_n) <= (1.0 + 1e-12) / (double(n) * n),
                  "omega constraint fails at n=" + std::to_string(n));
        c.require(lambda_n <= std::pow(double(n), 3) * (1.0 + 1e-12),
                  "lambda_" + std::to_string(n) + " = " + num(lambda_n) +
                      " above n^3");
    }

    const auto k = hf::kernels::MemoryKernel::singular_exponential(0.5, 1.0);
    const auto pair = *k.limit_pair();
    const double lambda = 1e3, beta = 10.0;
    const auto parts = hf::asymptotics::decompose(k, pair, lambda, beta);
    const double bound =
        beta * hf::kernels::omega_p(k, pair, beta / lambda) / (1.0 - pair.p);
    c.require(std::abs(parts.I2) <= bound * (1.0 + 1e-6),
              "|I2| = " + num(std::abs(parts.I2)) + " above bound " +
                  num(bound));
}

// 9. decay_forecast(p=0) = (2, 1/2, optimal) exactly; proxy exponent fits
// 2 - p within 0.05 for the closed-form kernels.
void crit_decay_exponents(Checker& c) {
    const auto f = hf::memory::decay_forecast({0.0, 1.0});
    c.require(f.resolvent_exponent == 2.0, "resolvent exponent not exactly 2");
    c.require(f.decay_exponent == 0.5, "decay exponent not exactly 1/2");
    c.require(f.optimal_at_p0, "p = 0 not flagged optimal");

    const std::vector<std::pair<std::string, double>> cases{
        {"exp(delta=1)", 0.0}, {"singexp(p=0.5,delta=1)", 0.5}};
    for (const auto& [text, p] : cases) {
        const auto k = hf::kernels::parse_kernel(text);
        const auto report =
            hf::memory::resolvent_growth_proxy(k, log_grid(1e2, 1e5, 16));
        c.require(std::abs(report.fitted_exponent - (2.0 - p)) <= 0.05,
                  text + ": exponent " + num(report.fitted_exponent) +
                      " not in " + num(2.0 - p) + " +- 0.05");
    }
}

// 10. Energy nonincreasing within 1e-6 E(0) per step at the stability-rule
// dt; halving dt cuts the worst violation at least in half.
void crit_dissipation(Checker& c) {
    const hf::memory::ModeParams params{
        1.0, hf::kernels::MemoryKernel::exponential(1.0), nullptr, 1.0, 0.0};
    const double mass = params.kernel.total_mass().value();
    const double dt = 0.1 * 2.0 * kPi / std::sqrt(params.alpha + mass);

    const auto traj = hf::memory::simulate_mode(params, 50.0, dt);
    const double e0 = traj.samples.front().energy;
    const double worst = worst_energy_rise(traj);
    c.require(worst <= 1e-6 * e0, "worst rise " + num(worst) +
                                      " above 1e-6 E0 = " + num(1e-6 * e0));

    const auto fine = hf::memory::simulate_mode(params, 50.0, dt / 2.0);
    const double worst_fine = worst_energy_rise(fine);
    c.require(worst_fine <= 0.5 * worst + 1e-12 * e0,
              "halving dt: worst rise " + num(worst_fine) +
                  " vs coarse " + num(worst));
}

// 11. Envelope experiment: fitted decay exponent <= 2/3 + 0.1 (one-sided).
void crit_envelope(Checker& c) {
    const auto k = hf::kernels::MemoryKernel::singular_exponential(0.5, 1.0);
    const std::vector<double> alphas{1.0, 10.0, 100.0, 1000.0};
    const double dt =
        0.999 * 0.1 * 2.0 * kPi / std::sqrt(1000.0 + k.total_mass().value());
    const double e = hf::memory::decay_envelope_experiment(
        k, *k.limit_pair(), alphas, 200.0, dt);
    c.require(e <= 2.0 / 3.0 + 0.1,
              "envelope exponent " + num(e) + " above 2/3 + 0.1");
}

struct CliResult {
    int status;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int status = hf::cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(HALFOURIER_GOLDEN_DIR) + "/" + name,
                     std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// 12. Byte-identical reruns for every subcommand; golden files for the
// worked CLI examples.
void crit_cli_determinism(Checker& c) {
    const std::vector<std::vector<std::string>> commands{
        {"transform", "--kernel", "singexp(p=0.5,delta=1)", "--lambda-min",
         "1", "--lambda-max", "1000", "--points", "5"},
        {"asymptote", "--kernel", "exp(delta=1)", "--lambda-min", "100",
         "--lambda-max", "10000", "--points", "5"},
        {"identify", "--kernel", "singexp(p=0.25,delta=1)"},
        {"lemma-check", "--which", "lemma1", "--kernel", "exp(delta=1)",
         "--lambda", "5", "--alpha", "0.3"},
        {"rate", "--p", "0.25"},
        {"proxy", "--kernel", "singexp(p=0.5,delta=1)", "--lambda-min", "10",
         "--lambda-max", "1000", "--points", "4"},
        {"simulate", "--kernel", "exp(delta=1)", "--alpha", "1", "--tmax",
         "5", "--dt", "0.25"},
    };
    for (const auto& cmd : commands) {
        const auto a = run_cli(cmd);
        const auto b = run_cli(cmd);
        c.require(a.status == 0, cmd[0] + ": status " + num(a.status));
        c.require(a.out == b.out && a.err == b.err,
                  cmd[0] + ": output differs between runs");
        c.require(!a.out.empty(), cmd[0] + ": empty output");
    }

    const auto transform =
        run_cli({"transform", "--kernel", "exp(delta=1)", "--lambda", "10",
                 "--tol", "1e-10"});
    c.require(transform.status == 0 &&
                  transform.out == read_golden("transform_exp_lambda10.csv"),
              "transform golden mismatch");
    const auto rate = run_cli({"rate", "--p", "0.5"});
    c.require(rate.status == 0 && rate.out == read_golden("rate_p05.txt"),
              "rate golden mismatch");
    const auto lemma = run_cli({"lemma-check", "--which", "lemma2", "--p",
                                "0.5", "--lambda", "1", "--beta", "1"});
    c.require(lemma.status == 0 &&
                  lemma.out == read_golden("lemma2_p05_l1_b1.txt"),
              "lemma-check golden mismatch");
}

struct Criterion {
    int id;
    const char* label;
    double budget_s;
    std::function<void(Checker&)> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "limit-constant modulus and phase", 0.1, crit_limit_constant},
        {2, "limit constant vs direct quadrature", 5.0,
         crit_constant_vs_quadrature},
        {3, "singular-window identity residuals", 30.0, crit_window_identity},
        {4, "shift/parts identity residuals", 30.0, crit_shift_parts_identity},
        {5, "exponential-kernel scaled limit and rate", 10.0,
         crit_exponential_scaled_limit},
        {6, "singular-kernel scaled limit via quadrature", 60.0,
         crit_singular_scaled_limit},
        {7, "endpoint-exponent identification", 1.0, crit_identification},
        {8, "beta staircase and singular-window bound", 5.0,
         crit_staircase_and_window_bound},
        {9, "decay forecast and resolvent-proxy exponents", 10.0,
         crit_decay_exponents},
        {10, "mode-energy monotonicity under dt halving", 30.0,
         crit_dissipation},
        {11, "multi-alpha decay envelope exponent", 300.0, crit_envelope},
        {12, "CLI determinism and golden outputs", 60.0,
         crit_cli_determinism},
    };

    int failed = 0;
    for (const auto& crit : criteria) {
        Checker checker;
        std::string aborted;
        const auto start = std::chrono::steady_clock::now();
        try {
            crit.body(checker);
        } catch (const std::exception& e) {
            aborted = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();

        std::vector<std::string> problems = checker.failures();
        if (!aborted.empty()) problems.push_back("exception: " + aborted);
        if (elapsed > crit.budget_s)
            problems.push_back("runtime " + num(elapsed) +
                               " s over budget " + num(crit.budget_s) + " s");

        std::ostringstream line;
        line << (problems.empty() ? "PASS" : "FAIL") << "  " << crit.id
             << "/12  " << crit.label << "  (" << num(elapsed) << " s)";
        std::cout << line.str() << "\n";
        for (const auto& msg : problems) std::cout << "      " << msg << "\n";
        if (!problems.empty()) ++failed;
    }

    std::cout << (12 - failed) << "/12 criteria passed\n";
    return failed;
}
