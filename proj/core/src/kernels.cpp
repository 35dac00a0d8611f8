#include "halfourier/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "halfourier/numfmt.hpp"
#include "halfourier/specfun.hpp"
#include "quadrature.hpp"

namespace halfourier::kernels {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct MemoryKernel::Node {
    struct Exp {
        double delta;
    };
    struct SingExp {
        double p, delta;
    };
    struct Tab {
        std::vector<double> s, v, dv;  // dv: node slopes, central differences
        std::string path;              // empty when built programmatically
    };
    struct Comp {
        std::function<double(double)> f, df;
        std::optional<LimitPair> pair;
    };
    struct Scale {
        double c;
        std::shared_ptr<const Node> child;
    };
    struct SumN {
        std::shared_ptr<const Node> a, b;
    };

    std::variant<Exp, SingExp, Tab, Comp, Scale, SumN> v;
};

namespace {

using Node = MemoryKernel::Node;

double node_eval(const Node& n, double s);
double node_deriv(const Node& n, double s);

std::size_t tab_cell(const Node::Tab& t, double s) {
    if (s < t.s.front() || s > t.s.back())
        throw std::out_of_range("tabulated kernel evaluated at s=" +
                                format_double(s) + " outside [" +
                                format_double(t.s.front()) + ", " +
                                format_double(t.s.back()) + "]");
    auto it = std::upper_bound(t.s.begin(), t.s.end(), s);
    std::size_t hi = static_cast<std::size_t>(it - t.s.begin());
    if (hi == 0) hi = 1;
    if (hi == t.s.size()) hi = t.s.size() - 1;
    return hi;
}

double tab_interp(const std::vector<double>& s, const std::vector<double>& y,
                  std::size_t hi, double x) {
    const double w = (x - s[hi - 1]) / (s[hi] - s[hi - 1]);
    return y[hi - 1] + w * (y[hi] - y[hi - 1]);
}

double node_eval(const Node& n, double s) {
    return std::visit(
        [s](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Node::Exp>) {
                return std::exp(-k.delta * s);
            } else if constexpr (std::is_same_v<T, Node::SingExp>) {
                return std::pow(s, -k.p) * std::exp(-k.delta * s);
            } else if constexpr (std::is_same_v<T, Node::Tab>) {
                return tab_interp(k.s, k.v, tab_cell(k, s), s);
            } else if constexpr (std::is_same_v<T, Node::Comp>) {
                return k.f(s);
            } else if constexpr (std::is_same_v<T, Node::Scale>) {
                return k.c * node_eval(*k.child, s);
            } else {
                return node_eval(*k.a, s) + node_eval(*k.b, s);
            }
        },
        n.v);
}

double node_deriv(const Node& n, double s) {
    return std::visit(
        [s](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Node::Exp>) {
                return -k.delta * std::exp(-k.delta * s);
            } else if constexpr (std::is_same_v<T, Node::SingExp>) {
                return -std::pow(s, -k.p) * std::exp(-k.delta * s) *
                       (k.p / s + k.delta);
            } else if constexpr (std::is_same_v<T, Node::Tab>) {
                return tab_interp(k.s, k.dv, tab_cell(k, s), s);
            } else if constexpr (std::is_same_v<T, Node::Comp>) {
                return k.df(s);
            } else if constexpr (std::is_same_v<T, Node::Scale>) {
                return k.c * node_deriv(*k.child, s);
            } else {
                return node_deriv(*k.a, s) + node_deriv(*k.b, s);
            }
        },
        n.v);
}

std::optional<LimitPair> node_pair(const Node& n) {
    return std::visit(
        [](const auto& k) -> std::optional<LimitPair> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Node::Exp>) {
                return LimitPair{0.0, 1.0};
            } else if constexpr (std::is_same_v<T, Node::SingExp>) {
                return LimitPair{k.p, 1.0};
            } else if constexpr (std::is_same_v<T, Node::Tab>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, Node::Comp>) {
                return k.pair;
            } else if constexpr (std::is_same_v<T, Node::Scale>) {
                auto c = node_pair(*k.child);
                if (!c) return std::nullopt;
                return LimitPair{c->p, k.c * c->ell};
            } else {
                auto a = node_pair(*k.a);
                auto b = node_pair(*k.b);
                if (!a || !b) return std::nullopt;
                // the more singular addend dominates at the origin
                if (std::abs(a->p - b->p) < 1e-12)
                    return LimitPair{std::max(a->p, b->p), a->ell + b->ell};
                return a->p > b->p ? a : b;
            }
        },
        n.v);
}

double node_domain_min(const Node& n) {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Node::Tab>) {
                return k.s.front();
            } else if constexpr (std::is_same_v<T, Node::Scale>) {
                return node_domain_min(*k.child);
            } else if constexpr (std::is_same_v<T, Node::SumN>) {
                return std::max(node_domain_min(*k.a), node_domain_min(*k.b));
            } else {
                return 0.0;
            }
        },
        n.v);
}

double node_domain_max(const Node& n) {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Node::Tab>) {
                return k.s.back();
            } else if constexpr (std::is_same_v<T, Node::Scale>) {
                return node_domain_max(*k.child);
            } else if constexpr (std::is_same_v<T, Node::SumN>) {
                return std::min(node_domain_max(*k.a), node_domain_max(*k.b));
            } else {
                return kInf;
            }
        },
        n.v);
}

std::optional<double> node_mass_tail(const Node& n, double T) {
    return std::visit(
        [T](const auto& k) -> std::optional<double> {
            using Ty = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<Ty, Node::Exp>) {
                return std::exp(-k.delta * T) / k.delta;
            } else if constexpr (std::is_same_v<Ty, Node::SingExp>) {
                return std::pow(T, -k.p) * std::exp(-k.delta * T) / k.delta;
            } else if constexpr (std::is_same_v<Ty, Node::Tab>) {
                if (T >= k.s.back()) return 0.0;
                double acc = 0.0;
                double lo = std::max(T, k.s.front());
                std::size_t hi = tab_cell(k, lo);
                double flo = std::abs(tab_interp(k.s, k.v, hi, lo));
                for (; hi < k.s.size(); ++hi) {
                    acc += 0.5 * (flo + std::abs(k.v[hi])) * (k.s[hi] - lo);
                    lo = k.s[hi];
                    flo = std::abs(k.v[hi]);
                }
                return acc;
            } else if constexpr (std::is_same_v<Ty, Node::Comp>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<Ty, Node::Scale>) {
                auto c = node_mass_tail(*k.child, T);
                if (!c) return std::nullopt;
                return std::abs(k.c) * *c;
            } else {
                auto a = node_mass_tail(*k.a, T);
                auto b = node_mass_tail(*k.b, T);
                if (!a || !b) return std::nullopt;
                return *a + *b;
            }
        },
        n.v);
}

std::optional<double> node_deriv_tail(const Node& n, double T) {
    return std::visit(
        [T](const auto& k) -> std::optional<double> {
            using Ty = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<Ty, Node::Exp>) {
                return std::exp(-k.delta * T);
            } else if constexpr (std::is_same_v<Ty, Node::SingExp>) {
                return (k.p / T + k.delta) * std::pow(T, -k.p) *
                       std::exp(-k.delta * T) / k.delta;
            } else if constexpr (std::is_same_v<Ty, Node::Tab>) {
                if (T >= k.s.back()) return 0.0;
                double lo = std::max(T, k.s.front());
                std::size_t hi = tab_cell(k, lo);
                double acc = std::abs(k.v[hi] - tab_interp(k.s, k.v, hi, lo));
                for (++hi; hi < k.s.size(); ++hi)
                    acc += std::abs(k.v[hi] - k.v[hi - 1]);
                return acc;
            } else if constexpr (std::is_same_v<Ty, Node::Comp>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<Ty, Node::Scale>) {
                auto c = node_deriv_tail(*k.child, T);
                if (!c) return std::nullopt;
                return std::abs(k.c) * *c;
            } else {
                auto a = node_deriv_tail(*k.a, T);
                auto b = node_deriv_tail(*k.b, T);
                if (!a || !b) return std::nullopt;
                return *a + *b;
            }
        },
        n.v);
}

std::optional<double> node_mass(const Node& n) {
    return std::visit(
        [](const auto& k) -> std::optional<double> {
            using Ty = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<Ty, Node::Exp>) {
                return 1.0 / k.delta;
            } else if constexpr (std::is_same_v<Ty, Node::SingExp>) {
                return specfun::gamma_real(1.0 - k.p) * std::pow(k.delta, k.p - 1.0);
            } else if constexpr (std::is_same_v<Ty, Node::Tab>) {
                double acc = 0.0;
                for (std::size_t i = 1; i < k.s.size(); ++i)
                    acc += 0.5 * (k.v[i - 1] + k.v[i]) * (k.s[i] - k.s[i - 1]);
                return acc;
            } else if constexpr (std::is_same_v<Ty, Node::Comp>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<Ty, Node::Scale>) {
                auto c = node_mass(*k.child);
                if (!c) return std::nullopt;
                return k.c * *c;
            } else {
                auto a = node_mass(*k.a);
                auto b = node_mass(*k.b);
                if (!a || !b) return std::nullopt;
                return *a + *b;
            }
        },
        n.v);
}

std::optional<Complex> node_transform(const Node& n, double lambda) {
    return std::visit(
        [lambda](const auto& k) -> std::optional<Complex> {
            using Ty = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<Ty, Node::Exp>) {
                return 1.0 / Complex(k.delta, lambda);
            } else if constexpr (std::is_same_v<Ty, Node::SingExp>) {
                return specfun::gamma_real(1.0 - k.p) *
                       std::pow(Complex(k.delta, lambda), k.p - 1.0);
            } else if constexpr (std::is_same_v<Ty, Node::Scale>) {
                auto c = node_transform(*k.child, lambda);
                if (!c) return std::nullopt;
                return k.c * *c;
            } else if constexpr (std::is_same_v<Ty, Node::SumN>) {
                auto a = node_transform(*k.a, lambda);
                auto b = node_transform(*k.b, lambda);
                if (!a || !b) return std::nullopt;
                return *a + *b;
            } else {
                return std::nullopt;
            }
        },
        n.v);
}

std::optional<std::string> node_render(const Node& n) {
    return std::visit(
        [](const auto& k) -> std::optional<std::string> {
            using Ty = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<Ty, Node::Exp>) {
                return "exp(delta=" + format_double(k.delta) + ")";
            } else if constexpr (std::is_same_v<Ty, Node::SingExp>) {
                return "singexp(p=" + format_double(k.p) +
                       ",delta=" + format_double(k.delta) + ")";
            } else if constexpr (std::is_same_v<Ty, Node::Tab>) {
                if (k.path.empty()) return std::nullopt;
                return "table:" + k.path;
            } else if constexpr (std::is_same_v<Ty, Node::Comp>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<Ty, Node::Scale>) {
                auto c = node_render(*k.child);
                if (!c) return std::nullopt;
                return "scale(" + format_double(k.c) + "," + *c + ")";
            } else {
                auto a = node_render(*k.a);
                auto b = node_render(*k.b);
                if (!a || !b) return std::nullopt;
                return "sum(" + *a + "," + *b + ")";
            }
        },
        n.v);
}

std::shared_ptr<const Node> make_node(std::variant<Node::Exp, Node::SingExp,
                                                   Node::Tab, Node::Comp,
                                                   Node::Scale, Node::SumN>
                                          v) {
    auto n = std::make_shared<Node>();
    n->v = std::move(v);
    return n;
}

}  // namespace

MemoryKernel MemoryKernel::exponential(double delta) {
    if (!(delta > 0.0))
        throw KernelValidationError("exp kernel requires delta > 0");
    return MemoryKernel(make_node(Node::Exp{delta}));
}

MemoryKernel MemoryKernel::singular_exponential(double p, double delta) {
    if (!(p >= 0.0 && p < 1.0))
        throw KernelValidationError("singexp kernel requires p in [0, 1)");
    if (!(delta > 0.0))
        throw KernelValidationError("singexp kernel requires delta > 0");
    return MemoryKernel(make_node(Node::SingExp{p, delta}));
}

MemoryKernel MemoryKernel::tabulated(
    std::vector<std::pair<double, double>> samples, std::string source_path) {
    if (samples.size() < 2)
        throw KernelValidationError("tabulated kernel needs at least 2 samples");
    Node::Tab t;
    t.path = std::move(source_path);
    t.s.reserve(samples.size());
    t.v.reserve(samples.size());
    for (const auto& [s, v] : samples) {
        if (!(s > 0.0) || !std::isfinite(s) || !std::isfinite(v))
            throw KernelValidationError(
                "tabulated kernel samples must have finite values and s > 0");
        if (!t.s.empty() && !(s > t.s.back()))
            throw KernelValidationError(
                "tabulated kernel samples must be strictly increasing in s");
        t.s.push_back(s);
        t.v.push_back(v);
    }
    const std::size_t n = t.s.size();
    t.dv.resize(n);
    t.dv[0] = (t.v[1] - t.v[0]) / (t.s[1] - t.s[0]);
    t.dv[n - 1] = (t.v[n - 1] - t.v[n - 2]) / (t.s[n - 1] - t.s[n - 2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
        t.dv[i] = (t.v[i + 1] - t.v[i - 1]) / (t.s[i + 1] - t.s[i - 1]);
    return MemoryKernel(make_node(std::move(t)));
}

MemoryKernel MemoryKernel::composite(std::function<double(double)> value,
                                     std::function<double(double)> deriv,
                                     std::optional<LimitPair> pair) {
    if (!value || !deriv)
        throw KernelValidationError(
            "composite kernel needs both a value and a derivative rule");
    return MemoryKernel(
        make_node(Node::Comp{std::move(value), std::move(deriv), pair}));
}

MemoryKernel MemoryKernel::scaled(double c, MemoryKernel k) {
    if (!std::isfinite(c))
        throw KernelValidationError("scale factor must be finite");
    return MemoryKernel(make_node(Node::Scale{c, std::move(k.node_)}));
}

MemoryKernel MemoryKernel::sum(MemoryKernel a, MemoryKernel b) {
    return MemoryKernel(make_node(Node::SumN{std::move(a.node_), std::move(b.node_)}));
}

double MemoryKernel::eval(double s) const { return node_eval(*node_, s); }
double MemoryKernel::eval_deriv(double s) const { return node_deriv(*node_, s); }

std::optional<LimitPair> MemoryKernel::limit_pair() const {
    return node_pair(*node_);
}

double MemoryKernel::domain_min() const { return node_domain_min(*node_); }
double MemoryKernel::domain_max() const { return node_domain_max(*node_); }

std::optional<double> MemoryKernel::mass_tail_bound(double T) const {
    return node_mass_tail(*node_, T);
}

std::optional<double> MemoryKernel::deriv_tail_bound(double T) const {
    return node_deriv_tail(*node_, T);
}

std::optional<double> MemoryKernel::total_mass() const {
    return node_mass(*node_);
}

std::optional<Complex> MemoryKernel::closed_form_transform(double lambda) const {
    return node_transform(*node_, lambda);
}

std::optional<std::string> MemoryKernel::render() const {
    return node_render(*node_);
}

// ---------------------------------------------------------------------------
// parsing

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& expected) const {
        std::string found = pos < text.size()
                                ? "'" + std::string(1, text[pos]) + "'"
                                : "end of input";
        throw KernelParseError("parse error at position " + std::to_string(pos) +
                                   ": expected " + expected + ", found " + found,
                               pos);
    }

    void skip_ws() {
        while (pos < text.size() &&
               std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos == text.size();
    }

    void expect(char c, const std::string& what) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) fail(what);
        ++pos;
    }

    std::string_view ident() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                text[pos] == '_'))
            ++pos;
        if (pos == start) fail("a kernel constructor name");
        return text.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        double value = 0.0;
        const char* first = text.data() + pos;
        const char* last = text.data() + text.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr == first) fail("a number");
        pos += static_cast<std::size_t>(ptr - first);
        return value;
    }

    void named_number(std::string_view name, double& out) {
        skip_ws();
        const auto id = ident();
        if (id != name) fail("parameter name '" + std::string(name) + "'");
        expect('=', "'=' after '" + std::string(name) + "'");
        out = number();
    }

    std::string path() {
        skip_ws();
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] != ',' && text[pos] != ')') ++pos;
        std::size_t end = pos;
        while (end > start &&
               std::isspace(static_cast<unsigned char>(text[end - 1])))
            --end;
        if (end == start) fail("a file path after 'table:'");
        return std::string(text.substr(start, end - start));
    }

    MemoryKernel expr() {
        const auto id = ident();
        if (id == "table") {
            expect(':', "':' after 'table'");
            return load_table(path());
        }
        if (id == "exp") {
            expect('(', "'(' after 'exp'");
            double delta = 0.0;
            named_number("delta", delta);
            expect(')', "')'");
            return MemoryKernel::exponential(delta);
        }
        if (id == "singexp") {
            expect('(', "'(' after 'singexp'");
            double p = 0.0, delta = 0.0;
            named_number("p", p);
            expect(',', "','");
            named_number("delta", delta);
            expect(')', "')'");
            return MemoryKernel::singular_exponential(p, delta);
        }
        if (id == "scale") {
            expect('(', "'(' after 'scale'");
            const double c = number();
            expect(',', "','");
            MemoryKernel child = expr();
            expect(')', "')'");
            return MemoryKernel::scaled(c, std::move(child));
        }
        if (id == "sum") {
            expect('(', "'(' after 'sum'");
            MemoryKernel a = expr();
            expect(',', "','");
            MemoryKernel b = expr();
            expect(')', "')'");
            return MemoryKernel::sum(std::move(a), std::move(b));
        }
        pos -= id.size();
        fail("one of 'exp', 'singexp', 'table', 'scale', 'sum'");
    }

    static MemoryKernel load_table(const std::string& file) {
        std::ifstream in(file);
        if (!in) throw TableFileError("cannot open table file: " + file);
        std::string line;
        if (!std::getline(in, line))
            throw TableFileError("table file is empty: " + file);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != "s,value")
            throw TableFileError("table header must be 's,value' in " + file);
        std::vector<std::pair<double, double>> samples;
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            const auto comma = line.find(',');
            if (comma == std::string::npos)
                throw TableFileError("line " + std::to_string(lineno) + " of " +
                                     file + " is not 's,value'");
            double s = 0.0, v = 0.0;
            auto r1 = std::from_chars(line.data(), line.data() + comma, s);
            auto r2 = std::from_chars(line.data() + comma + 1,
                                      line.data() + line.size(), v);
            if (r1.ec != std::errc() || r1.ptr != line.data() + comma ||
                r2.ec != std::errc() || r2.ptr != line.data() + line.size())
                throw TableFileError("line " + std::to_string(lineno) + " of " +
                                     file + " is not two numbers");
            samples.emplace_back(s, v);
        }
        return MemoryKernel::tabulated(std::move(samples), file);
    }
};

}  // namespace

MemoryKernel parse_kernel(std::string_view text) {
    Parser p{text};
    MemoryKernel k = p.expr();
    if (!p.at_end()) p.fail("end of input");
    return k;
}

// ---------------------------------------------------------------------------
// analysis

double check_dafermos(const MemoryKernel& k, const std::vector<double>& grid) {
    if (grid.empty())
        throw std::invalid_argument("check_dafermos needs a nonempty grid");
    double inf = kInf;
    for (double s : grid)
        inf = std::min(inf, -k.eval_deriv(s) / k.eval(s));
    if (!(inf > 0.0) || inf == kInf) return 0.0;
    return inf;
}

IdentifyResult identify_limit(const MemoryKernel& k, double s_min, double s_max,
                              int n) {
    if (!(s_min > 0.0 && s_max > s_min))
        throw std::invalid_argument("identify_limit needs 0 < s_min < s_max");
    if (n < 2) throw std::invalid_argument("identify_limit needs n >= 2");

    std::vector<double> xs, ys, ss;
    const double l0 = std::log(s_min), l1 = std::log(s_max);
    for (int i = 0; i < n; ++i) {
        const double s = std::exp(l0 + (l1 - l0) * i / (n - 1));
        const double v = k.eval(s);
        if (!(v > 0.0))
            throw std::domain_error(
                "identify_limit requires positive kernel values (got " +
                format_double(v) + " at s=" + format_double(s) + ")");
        ss.push_back(s);
        xs.push_back(std::log(s));
        ys.push_back(std::log(v));
    }

    const auto fit = detail::fit_line(xs, ys);
    IdentifyResult out;
    out.pair.p = std::clamp(-fit.slope, 0.0, 1.0 - 1e-12);
    out.pair.ell = std::exp(fit.intercept);

    double sq = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double predicted = fit.intercept + fit.slope * xs[i];
        sq += (ys[i] - predicted) * (ys[i] - predicted);
        out.rows.push_back({ss[i], std::exp(ys[i]), std::exp(predicted)});
    }
    out.residual = std::sqrt(sq / xs.size());
    return out;
}

double omega_p(const MemoryKernel& k, LimitPair pair, double s, int n) {
    if (!(s > 0.0)) throw std::invalid_argument("omega_p needs s > 0");
    if (s > k.domain_max())
        throw std::out_of_range("omega_p: s beyond the kernel's evaluable range");
    if (n < 2) throw std::invalid_argument("omega_p needs n >= 2");

    const double lo = std::max(k.domain_min(), s * 1e-8);
    if (!(lo < s)) {
        return std::abs(std::pow(s, pair.p) * k.eval(s) - pair.ell);
    }

    auto sup_on_grid = [&](int m) {
        const double a = std::log(lo), b = std::log(s);
        double sup = 0.0;
        for (int i = 0; i < m; ++i) {
            const double t = std::exp(a + (b - a) * i / (m - 1));
            sup = std::max(sup,
                           std::abs(std::pow(t, pair.p) * k.eval(t) - pair.ell));
        }
        return sup;
    };

    double sup = sup_on_grid(n);
    for (int round = 0; round < 8; ++round) {
        n *= 2;
        const double next = sup_on_grid(n);
        const bool settled = next <= sup * 1.01 && sup <= next * 1.01;
        sup = std::max(sup, next);
        if (settled) break;
    }
    return sup;
}

ModulusOfContinuity omega_function(const MemoryKernel& k, LimitPair pair,
                                   int n) {
    return ModulusOfContinuity{
        [k, pair, n](double s) { return omega_p(k, pair, s, n); }};
}

std::vector<std::pair<double, double>> check_condition_AA(
    const MemoryKernel& k, LimitPair pair, const std::vector<double>& xs) {
    if (xs.empty())
        throw std::invalid_argument("check_condition_AA needs at least one x");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0))
            throw std::invalid_argument("check_condition_AA needs x > 0");
        if (i > 0 && !(xs[i] < xs[i - 1]))
            throw std::invalid_argument(
                "check_condition_AA needs strictly decreasing x");
    }

    // Far end of the |f'| integral: analytic bound when available, otherwise
    // probe by doubling until chunks die away.
    double T = k.domain_max();
    if (T == kInf) {
        T = std::max(1.0, xs.front());
        const double scale =
            std::abs(k.eval(xs.front())) +
            xs.front() * std::abs(k.eval_deriv(xs.front())) + 1e-300;
        bool settled = false;
        for (int i = 0; i < 60; ++i) {
            if (auto bound = k.deriv_tail_bound(T)) {
                if (*bound <= 1e-13 * scale) {
                    settled = true;
                    break;
                }
            } else {
                const double probe = std::abs(k.eval_deriv(T)) * T;
                if (probe <= 1e-14 * scale) {
                    settled = true;
                    break;
                }
            }
            T *= 2.0;
        }
        if (!settled)
            throw NotSummableError(
                "check_condition_AA: |f'| tail mass would not settle");
    }

    // Accumulate \int_x^T |f'| from the right, reusing previous segments.
    auto g = [&k](double u) -> Complex {
        const double s = std::exp(u);
        return std::abs(k.eval_deriv(s)) * s;
    };

    std::vector<std::pair<double, double>> out;
    double acc = 0.0;
    double right = T;
    for (double x : xs) {
        const double left = std::min(x, right);
        if (left < right) {
            const double scale =
                std::abs(k.eval(left)) + left * std::abs(k.eval_deriv(left)) + acc;
            acc += detail::adaptive(g, std::log(left), std::log(right),
                                    1e-11 * (scale + 1e-300))
                       .value.real();
            right = left;
        }
        out.emplace_back(x, std::pow(x, pair.p) * acc);
    }
    return out;
}

}  // namespace halfourier::kernels
