#include "halfourier/cli_app.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "halfourier/asymptotics.hpp"
#include "halfourier/errors.hpp"
#include "halfourier/kernels.hpp"
#include "halfourier/memory.hpp"
#include "halfourier/numfmt.hpp"
#include "halfourier/oscquad.hpp"
#include "halfourier/specfun.hpp"

namespace halfourier::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fd(double v) { return format_double(v); }

// Log-spaced grid; a single explicit lambda wins over the range flags.
std::vector<double> make_grid(const std::optional<double>& single,
                              const std::optional<double>& lo,
                              const std::optional<double>& hi, int points) {
    if (single) {
        if (!(*single > 0.0)) throw UsageError("--lambda must be > 0");
        return {*single};
    }
    if (!lo || !hi)
        throw UsageError(
            "give either --lambda or the pair --lambda-min/--lambda-max");
    if (!(*lo > 0.0) || !(*hi > *lo))
        throw UsageError("need 0 < --lambda-min < --lambda-max");
    if (points < 1) throw UsageError("--points must be >= 1");
    std::vector<double> grid;
    if (points == 1) {
        grid.push_back(*lo);
        return grid;
    }
    const double l0 = std::log(*lo), l1 = std::log(*hi);
    for (int i = 0; i < points; ++i)
        grid.push_back(std::exp(l0 + (l1 - l0) * i / (points - 1)));
    return grid;
}

kernels::LimitPair resolve_pair(const kernels::MemoryKernel& k,
                                const std::optional<double>& p_flag,
                                const std::optional<double>& ell_flag) {
    const auto meta = k.limit_pair();
    kernels::LimitPair pair;
    if (meta) pair = *meta;
    if (p_flag) pair.p = *p_flag;
    if (ell_flag) pair.ell = *ell_flag;
    if (!meta && !p_flag && !ell_flag)
        throw UsageError(
            "the kernel carries no (p, ell) data; pass --p and --ell");
    if (!(pair.p >= 0.0 && pair.p < 1.0))
        throw UsageError("p must lie in [0, 1)");
    return pair;
}

// Output sink: --out redirects the CSV/text payload into a file.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw UsageError("cannot open output file: " + path);
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

struct TransformArgs {
    std::string kernel;
    std::optional<double> lambda, lambda_min, lambda_max;
    int points = 20;
    double tol = 1e-10;
    std::string out_path;
};

int run_transform(const TransformArgs& a, std::ostream& out, std::ostream& err) {
    const auto k = kernels::parse_kernel(a.kernel);
    const auto grid = make_grid(a.lambda, a.lambda_min, a.lambda_max, a.points);
    oscquad::QuadConfig cfg;
    cfg.tol = a.tol;

    Sink sink(a.out_path, out);
    sink.stream() << "lambda,re,im,err_est\n";
    int status = 0;
    for (double lambda : grid) {
        Complex value;
        double err_est = 0.0;
        try {
            const auto r = oscquad::half_fourier(k, std::nullopt, lambda, cfg);
            value = r.value;
            err_est = r.err_est;
        } catch (const ToleranceNotReached& e) {
            value = e.best_estimate();
            err_est = e.achieved();
            err << "warning: lambda=" << fd(lambda)
                << " missed the tolerance: " << e.what() << "\n";
            status = 1;
        }
        sink.stream() << fd(lambda) << ',' << fd(value.real()) << ','
                      << fd(value.imag()) << ',' << fd(err_est) << "\n";
    }
    return status;
}

struct AsymptoteArgs {
    std::string kernel;
    std::optional<double> lambda, lambda_min, lambda_max;
    int points = 20;
    double tol = 1e-10;
    std::optional<double> p, ell;
    bool quadrature = false;
    std::string out_path;
};

int run_asymptote(const AsymptoteArgs& a, std::ostream& out, std::ostream& err) {
    const auto k = kernels::parse_kernel(a.kernel);
    const auto pair = resolve_pair(k, a.p, a.ell);
    const auto grid = make_grid(a.lambda, a.lambda_min, a.lambda_max, a.points);
    oscquad::QuadConfig cfg;
    cfg.tol = a.tol;

    const auto report =
        asymptotics::verify_theorem1(k, pair, grid, cfg, !a.quadrature);

    Sink sink(a.out_path, out);
    sink.stream() << "lambda,scaled_re,scaled_im,deviation\n";
    int status = 0;
    for (const auto& row : report.rows) {
        sink.stream() << fd(row.lambda) << ',' << fd(row.scaled.real()) << ','
                      << fd(row.scaled.imag()) << ',' << fd(row.deviation)
                      << "\n";
        if (!row.converged) {
            err << "warning: lambda=" << fd(row.lambda)
                << " missed the tolerance: " << row.note << "\n";
            status = 1;
        }
    }
    err << "fitted_slope=" << fd(report.fitted_slope)
        << " target_re=" << fd(report.target.real())
        << " target_im=" << fd(report.target.imag()) << "\n";
    return status;
}

struct IdentifyArgs {
    std::string kernel;
    double s_min = 1e-6, s_max = 1e-3;
    int n = 64;
};

int run_identify(const IdentifyArgs& a, std::ostream& out) {
    const auto k = kernels::parse_kernel(a.kernel);
    const auto r = kernels::identify_limit(k, a.s_min, a.s_max, a.n);
    out << "p=" << fd(r.pair.p) << " ell=" << fd(r.pair.ell)
        << " residual=" << fd(r.residual) << "\n";
    return 0;
}

struct LemmaArgs {
    std::string which;
    std::string kernel;
    std::optional<double> p, ell;
    double lambda = 1.0;
    double beta = 1.0;
    double alpha = 1.0;
    double tol = 1e-10;
};

int run_lemma_check(const LemmaArgs& a, std::ostream& out) {
    if (a.which == "lemma2") {
        if (!a.p) throw UsageError("lemma2 needs --p");
        const Complex lhs = oscquad::lemma2_lhs(*a.p, a.lambda, a.beta, a.tol);
        const Complex rhs = oscquad::lemma2_rhs(*a.p, a.beta);
        out << "residual=" << fd(std::abs(lhs - rhs)) << "\n";
        return 0;
    }
    if (a.which == "lemma1") {
        if (a.kernel.empty()) throw UsageError("lemma1 needs --kernel");
        const auto k = kernels::parse_kernel(a.kernel);
        out << "residual="
            << fd(asymptotics::check_lemma1(k, a.lambda, a.alpha, a.tol))
            << "\n";
        return 0;
    }
    if (a.which == "p0") {
        if (a.kernel.empty()) throw UsageError("p0 needs --kernel");
        const auto k = kernels::parse_kernel(a.kernel);
        double ell;
        if (a.ell) {
            ell = *a.ell;
        } else {
            const auto meta = k.limit_pair();
            if (!meta) throw UsageError("p0 needs --ell (kernel has no metadata)");
            if (meta->p != 0.0)
                throw UsageError("the p0 check needs a kernel with p = 0");
            ell = meta->ell;
        }
        out << "residual="
            << fd(asymptotics::check_p0_formula(k, ell, a.lambda, a.tol))
            << "\n";
        return 0;
    }
    if (a.which == "decompose") {
        if (a.kernel.empty()) throw UsageError("decompose needs --kernel");
        const auto k = kernels::parse_kernel(a.kernel);
        const auto pair = resolve_pair(k, a.p, a.ell);
        oscquad::QuadConfig cfg;
        cfg.tol = a.tol;
        const auto d =
            asymptotics::decompose(k, pair, a.lambda, a.beta, cfg);
        const Complex sum = d.I1 + d.I2 + d.I3;
        out << "i1_re=" << fd(d.I1.real()) << " i1_im=" << fd(d.I1.imag())
            << " i2_re=" << fd(d.I2.real()) << " i2_im=" << fd(d.I2.imag())
            << " i3_re=" << fd(d.I3.real()) << " i3_im=" << fd(d.I3.imag())
            << " sum_re=" << fd(sum.real()) << " sum_im=" << fd(sum.imag())
            << "\n";
        return 0;
    }
    throw UsageError("--which must be one of lemma1, lemma2, p0, decompose");
}

struct RateArgs {
    double p = 0.0;
    double ell = 1.0;
};

int run_rate(const RateArgs& a, std::ostream& out) {
    const auto f = memory::decay_forecast({a.p, a.ell});
    out << "resolvent_exponent=" << fd(f.resolvent_exponent)
        << " decay_exponent=" << fd(f.decay_exponent)
        << " optimal_p0=" << (f.optimal_at_p0 ? "true" : "false") << "\n";
    return 0;
}

struct ProxyArgs {
    std::string kernel;
    std::optional<double> lambda, lambda_min, lambda_max;
    int points = 20;
    double tol = 1e-10;
    std::string out_path;
};

int run_proxy(const ProxyArgs& a, std::ostream& out, std::ostream& err) {
    const auto k = kernels::parse_kernel(a.kernel);
    const auto grid = make_grid(a.lambda, a.lambda_min, a.lambda_max, a.points);
    oscquad::QuadConfig cfg;
    cfg.tol = a.tol;
    const auto report = memory::resolvent_growth_proxy(k, grid, cfg);

    Sink sink(a.out_path, out);
    sink.stream() << "lambda,g\n";
    for (const auto& row : report.rows)
        sink.stream() << fd(row.lambda) << ',' << fd(row.g) << "\n";
    err << "fitted_exponent=" << fd(report.fitted_exponent);
    if (report.predicted_prefactor)
        err << " predicted_prefactor=" << fd(*report.predicted_prefactor);
    err << "\n";
    return 0;
}

struct SimulateArgs {
    std::string kernel;
    double alpha = 1.0;
    double t_max = 50.0;
    double dt = 0.0;
    double u0 = 1.0;
    double v0 = 0.0;
    std::string out_path;
};

int run_simulate(const SimulateArgs& a, std::ostream& out) {
    const auto k = kernels::parse_kernel(a.kernel);
    const auto traj = memory::simulate_mode(
        {a.alpha, k, nullptr, a.u0, a.v0}, a.t_max, a.dt);
    Sink sink(a.out_path, out);
    sink.stream() << "t,u,v,energy\n";
    for (const auto& s : traj.samples)
        sink.stream() << fd(s.t) << ',' << fd(s.u) << ',' << fd(s.v) << ','
                      << fd(s.energy) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{
        "Half-line Fourier transforms of memory kernels, their large-lambda "
        "behaviour, and energy-decay diagnostics"};
    app.name("halfourier");
    app.require_subcommand(1);

    TransformArgs ta;
    auto* t = app.add_subcommand(
        "transform", "evaluate the transform on a lambda grid (CSV)");
    t->add_option("--kernel", ta.kernel, "kernel text, e.g. exp(delta=1)")
        ->required();
    t->add_option("--lambda", ta.lambda, "single frequency");
    t->add_option("--lambda-min", ta.lambda_min, "grid start");
    t->add_option("--lambda-max", ta.lambda_max, "grid end");
    t->add_option("--points", ta.points, "grid size (log-spaced)");
    t->add_option("--tol", ta.tol, "quadrature tolerance");
    t->add_option("--out", ta.out_path, "write CSV here instead of stdout");

    AsymptoteArgs aa;
    auto* as = app.add_subcommand(
        "asymptote", "scaled transforms lambda^{1-p} f_hat vs their limit (CSV)");
    as->add_option("--kernel", aa.kernel, "kernel text")->required();
    as->add_option("--lambda", aa.lambda, "single frequency");
    as->add_option("--lambda-min", aa.lambda_min, "grid start");
    as->add_option("--lambda-max", aa.lambda_max, "grid end");
    as->add_option("--points", aa.points, "grid size (log-spaced)");
    as->add_option("--tol", aa.tol, "quadrature tolerance");
    as->add_option("--p", aa.p, "override the singularity exponent");
    as->add_option("--ell", aa.ell, "override the limit amplitude");
    as->add_flag("--quadrature", aa.quadrature,
                 "force the quadrature path even when a closed form exists");
    as->add_option("--out", aa.out_path, "write CSV here instead of stdout");

    IdentifyArgs ia;
    auto* id = app.add_subcommand(
        "identify", "fit (p, ell) from kernel samples near 0");
    id->add_option("--kernel", ia.kernel, "kernel text")->required();
    id->add_option("--smin", ia.s_min, "fit window start");
    id->add_option("--smax", ia.s_max, "fit window end");
    id->add_option("--n", ia.n, "number of log-spaced samples");

    LemmaArgs la;
    auto* lc = app.add_subcommand("lemma-check",
                                  "residuals of the transform identities");
    lc->add_option("--which", la.which, "lemma1 | lemma2 | p0 | decompose")
        ->required();
    lc->add_option("--kernel", la.kernel, "kernel text (lemma1/p0/decompose)");
    lc->add_option("--p", la.p, "singularity exponent");
    lc->add_option("--ell", la.ell, "limit amplitude");
    lc->add_option("--lambda", la.lambda, "frequency");
    lc->add_option("--beta", la.beta, "split parameter");
    lc->add_option("--alpha", la.alpha, "left endpoint (lemma1)");
    lc->add_option("--tol", la.tol, "quadrature tolerance");

    RateArgs ra;
    auto* rt = app.add_subcommand("rate", "decay-rate forecast from (p, ell)");
    rt->add_option("--p", ra.p, "singularity exponent")->required();
    rt->add_option("--ell", ra.ell, "limit amplitude");

    ProxyArgs pa;
    auto* px = app.add_subcommand(
        "proxy", "resolvent growth proxy lambda/|mu_hat| (CSV)");
    px->add_option("--kernel", pa.kernel, "kernel text")->required();
    px->add_option("--lambda", pa.lambda, "single frequency");
    px->add_option("--lambda-min", pa.lambda_min, "grid start");
    px->add_option("--lambda-max", pa.lambda_max, "grid end");
    px->add_option("--points", pa.points, "grid size (log-spaced)");
    px->add_option("--tol", pa.tol, "quadrature tolerance");
    px->add_option("--out", pa.out_path, "write CSV here instead of stdout");

    SimulateArgs sa;
    auto* sim = app.add_subcommand(
        "simulate", "integrate one memory mode and record (t,u,v,energy)");
    sim->add_option("--kernel", sa.kernel, "kernel text")->required();
    sim->add_option("--alpha", sa.alpha, "mode stiffness")->required();
    sim->add_option("--tmax", sa.t_max, "end time")->required();
    sim->add_option("--dt", sa.dt, "time step")->required();
    sim->add_option("--u0", sa.u0, "initial displacement");
    sim->add_option("--v0", sa.v0, "initial velocity");
    sim->add_option("--out", sa.out_path, "write CSV here instead of stdout");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(t)) return run_transform(ta, out, err);
        if (app.got_subcommand(as)) return run_asymptote(aa, out, err);
        if (app.got_subcommand(id)) return run_identify(ia, out);
        if (app.got_subcommand(lc)) return run_lemma_check(la, out);
        if (app.got_subcommand(rt)) return run_rate(ra, out);
        if (app.got_subcommand(px)) return run_proxy(pa, out, err);
        if (app.got_subcommand(sim)) return run_simulate(sa, out);
        err << "error: no subcommand selected\n";
        return 2;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const KernelParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const KernelValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const TableFileError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace halfourier::cli
