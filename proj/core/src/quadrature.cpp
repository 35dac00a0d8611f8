#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace halfourier::detail {

namespace {

GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

Complex panel_sum(const ComplexFn& f, double a, double b, const GaussRule& r) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
        acc += r.weights[i] * f(mid + half * r.nodes[i]);
    return acc * half;
}

Complex oscillating_panel(const RealFn& f, double omega, double a, double b,
                          const GaussRule& r) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Complex acc = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        const double s = mid + half * r.nodes[i];
        const double phase = -omega * s;
        acc += r.weights[i] * f(s) * Complex(std::cos(phase), std::sin(phase));
    }
    return acc * half;
}

Complex sum_over(const RealFn& f, double omega, const std::vector<double>& pts,
                 const GaussRule& r) {
    Complex acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += oscillating_panel(f, omega, pts[i], pts[i + 1], r);
    return acc;
}

std::vector<double> split_each(const std::vector<double>& pts) {
    std::vector<double> out;
    out.reserve(pts.size() * 2 - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        out.push_back(pts[i]);
        out.push_back(0.5 * (pts[i] + pts[i + 1]));
    }
    out.push_back(pts.back());
    return out;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

QuadResult adaptive(const ComplexFn& f, double a, double b, double abs_tol,
                    long max_panels) {
    const GaussRule& r = gauss_rule(15);
    struct Seg {
        double a, b, tol;
        Complex coarse;
    };
    std::vector<Seg> stack{{a, b, abs_tol, panel_sum(f, a, b, r)}};
    QuadResult out;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const Complex left = panel_sum(f, s.a, m, r);
        const Complex right = panel_sum(f, m, s.b, r);
        const Complex fine = left + right;
        const double delta = std::abs(fine - s.coarse);
        out.panels += 2;
        const double width = s.b - s.a;
        if (delta <= s.tol || width <= 64.0 * std::abs(m) * 1e-17 + 1e-300) {
            out.value += fine;
            out.err_est += delta;
            continue;
        }
        if (out.panels > max_panels) {
            Complex best = out.value + fine;
            for (const Seg& rem : stack) best += rem.coarse;
            throw ToleranceNotReached("adaptive quadrature panel budget exhausted",
                                      best, out.err_est + delta);
        }
        stack.push_back({s.a, m, 0.5 * s.tol, left});
        stack.push_back({m, s.b, 0.5 * s.tol, right});
    }
    return out;
}

QuadResult fourier_panels(const RealFn& f, double omega, double a, double b,
                          double abs_tol, long max_panels, bool graded_left) {
    QuadResult out;
    if (!(b > a)) return out;

    const double half_period =
        omega > 0.0 ? std::numbers::pi / omega : (b - a);

    std::vector<double> pts{a};
    if (graded_left && a > 0.0) {
        // Geometric zone: panel widths ~0.35 of the distance to the origin,
        // until they reach the oscillation-resolving width.
        double pos = a;
        while (0.35 * pos < half_period && pos * 1.35 < b) {
            pos *= 1.35;
            pts.push_back(pos);
        }
    }
    {
        const double start = pts.back();
        long n = static_cast<long>(std::ceil((b - start) / half_period));
        n = std::max(n, graded_left ? 1L : 8L);
        if (n + static_cast<long>(pts.size()) - 1 > max_panels)
            throw ToleranceNotReached(
                "oscillatory integral needs more panels than allowed",
                Complex(0.0), std::abs(b - a));
        const double h = (b - start) / static_cast<double>(n);
        for (long i = 1; i < n; ++i) pts.push_back(start + h * i);
        pts.push_back(b);
    }

    const GaussRule& r11 = gauss_rule(11);
    const GaussRule& r15 = gauss_rule(15);
    Complex v11 = sum_over(f, omega, pts, r11);
    Complex v15 = sum_over(f, omega, pts, r15);
    out.panels = 2 * static_cast<long>(pts.size() - 1);
    double delta = std::abs(v15 - v11);
    if (delta <= abs_tol) {
        out.value = v15;
        out.err_est = delta;
        return out;
    }

    Complex prev = v15;
    for (int round = 0; round < 14; ++round) {
        pts = split_each(pts);
        const long n_panels = static_cast<long>(pts.size() - 1);
        if (out.panels + n_panels > max_panels)
            throw ToleranceNotReached("oscillatory integral panel budget exhausted",
                                      prev, delta);
        const Complex v = sum_over(f, omega, pts, r15);
        out.panels += n_panels;
        delta = std::abs(v - prev);
        prev = v;
        if (delta <= abs_tol) {
            out.value = v;
            out.err_est = delta;
            return out;
        }
    }
    throw ToleranceNotReached("oscillatory integral did not settle", prev, delta);
}

QuadResult graded_panels(const ComplexFn& g, double b, double p,
                         double abs_tol, long max_cells) {
    QuadResult out;
    if (!(b > 0.0)) return out;
    const double grade = 1.0 / (1.0 - p);
    const GaussRule& r = gauss_rule(7);

    auto mesh_sum = [&](long n) {
        Complex acc = 0.0;
        double lo = 0.0;
        for (long j = 1; j <= n; ++j) {
            const double hi =
                b * std::pow(static_cast<double>(j) / static_cast<double>(n), grade);
            acc += panel_sum(g, lo, hi, r);
            lo = hi;
        }
        return acc;
    };

    long n = 16;
    Complex prev = mesh_sum(n);
    out.panels = n;
    for (;;) {
        n *= 2;
        if (out.panels + n > max_cells)
            throw ToleranceNotReached("graded quadrature cell budget exhausted",
                                      prev, out.err_est);
        const Complex v = mesh_sum(n);
        out.panels += n;
        const double delta = std::abs(v - prev);
        prev = v;
        if (delta <= abs_tol) {
            out.value = v;
            out.err_est = delta;
            return out;
        }
    }
}

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    const std::size_t n = std::min(xs.size(), ys.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double d = n * sxx - sx * sx;
    LineFit fit;
    if (n >= 2 && d != 0.0) {
        fit.slope = (n * sxy - sx * sy) / d;
        fit.intercept = (sy - fit.slope * sx) / n;
    }
    return fit;
}

}  // namespace halfourier::detail
