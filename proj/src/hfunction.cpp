#include "hinv/hfunction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hinv/tanh_sinh.hpp"

namespace hinv {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_probability_sequence(const std::vector<double>& values, const char* what)
{
    double prev = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = values[i];
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string(what) + ": value " + std::to_string(v) +
                                        " at index " + std::to_string(i) + " outside [0, 1]");
        if (v < prev)
            throw std::invalid_argument(std::string(what) + ": values decrease at index " +
                                        std::to_string(i));
        prev = v;
    }
    if (values.empty() || values.back() != 1.0)
        throw std::invalid_argument(std::string(what) + ": last value must be 1");
}

void check_radii(const std::vector<double>& radii, const char* what)
{
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] >= 0.0) || !std::isfinite(radii[i]))
            throw std::invalid_argument(std::string(what) + ": radius at index " +
                                        std::to_string(i) + " is negative or not finite");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw std::invalid_argument(std::string(what) + ": radii must be strictly ascending (index " +
                                        std::to_string(i) + ")");
    }
}

// Distinct values in (0, 1); each is a jump of the inverse of a step function.
std::vector<double> interior_unique(const std::vector<double>& values)
{
    std::vector<double> out;
    for (double v : values)
        if (v > 0.0 && v < 1.0 && (out.empty() || out.back() != v)) out.push_back(v);
    return out;
}

double step_eval(const StepH& s, double r)
{
    auto it = std::upper_bound(s.breakpoints.begin(), s.breakpoints.end(), r);
    if (it == s.breakpoints.begin()) return 0.0;
    return s.values[static_cast<std::size_t>(it - s.breakpoints.begin()) - 1];
}

double table_eval(const TabulatedH& t, double r)
{
    if (r < t.radii.front()) return 0.0;
    if (r >= t.radii.back()) return 1.0;
    auto it = std::upper_bound(t.radii.begin(), t.radii.end(), r);
    const auto i = static_cast<std::size_t>(it - t.radii.begin());
    const double r0 = t.radii[i - 1], r1 = t.radii[i];
    const double v0 = t.values[i - 1], v1 = t.values[i];
    if (r == r0) return v0;
    return v0 + (v1 - v0) * ((r - r0) / (r1 - r0));
}

double table_inverse(const TabulatedH& t, double s)
{
    if (s <= t.values.front()) return t.radii.front();
    auto it = std::lower_bound(t.values.begin(), t.values.end(), s);
    if (it == t.values.end()) return std::numeric_limits<double>::infinity();
    const auto i = static_cast<std::size_t>(it - t.values.begin());
    if (t.values[i] == s) {
        // First radius attaining s.
        return t.radii[i];
    }
    const double v0 = t.values[i - 1], v1 = t.values[i];
    const double r0 = t.radii[i - 1], r1 = t.radii[i];
    const double r = std::min(r1, r0 + (r1 - r0) * ((s - v0) / (v1 - v0)));
    // s > h(r0) forces the infimum strictly past r0 even when the increment rounds away.
    return r > r0 ? r : std::nextafter(r0, r1);
}

}  // namespace

HFunction::HFunction(Kind kind) : kind_(std::move(kind))
{
    std::visit(overloaded{
                   [this](const ClosedFormH& c) {
                       d_min_ = c.d_min;
                       g_jumps_ = c.g_jumps;
                       radius_breaks_ = c.radius_breaks;
                   },
                   [this](const StepH& s) {
                       auto it = std::find_if(s.values.begin(), s.values.end(),
                                              [](double v) { return v > 0.0; });
                       d_min_ = s.breakpoints[static_cast<std::size_t>(it - s.values.begin())];
                       g_jumps_ = interior_unique(s.values);
                       radius_breaks_ = s.breakpoints;
                   },
                   [this](const TabulatedH& t) {
                       if (t.values.front() > 0.0) {
                           d_min_ = t.radii.front();
                       } else {
                           std::size_t last_zero = 0;
                           while (last_zero + 1 < t.values.size() && t.values[last_zero + 1] == 0.0)
                               ++last_zero;
                           d_min_ = t.radii[last_zero];
                       }
                       // Flat stretches of h become jumps of the inverse.
                       for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
                           const double v = t.values[i];
                           if (v > 0.0 && v < 1.0 && t.values[i + 1] == v &&
                               (g_jumps_.empty() || g_jumps_.back() != v))
                               g_jumps_.push_back(v);
                       }
                       radius_breaks_ = t.radii;
                   },
               },
               kind_);
}

HFunction HFunction::closed_form(ClosedFormH c)
{
    if (!c.h || !c.inverse) throw std::invalid_argument("closed-form h-function needs h and inverse");
    std::sort(c.g_jumps.begin(), c.g_jumps.end());
    std::sort(c.radius_breaks.begin(), c.radius_breaks.end());
    return HFunction(std::move(c));
}

HFunction HFunction::step(std::vector<double> breakpoints, std::vector<double> values)
{
    if (breakpoints.size() != values.size() || breakpoints.empty())
        throw std::invalid_argument("step h-function: breakpoints and values must be non-empty and equal length");
    check_radii(breakpoints, "step h-function");
    check_probability_sequence(values, "step h-function");
    return HFunction(StepH{std::move(breakpoints), std::move(values)});
}

HFunction HFunction::tabulated(std::vector<double> radii, std::vector<double> values)
{
    if (radii.size() != values.size() || radii.empty())
        throw std::invalid_argument("tabulated h-function: radii and values must be non-empty and equal length");
    check_radii(radii, "tabulated h-function");
    check_probability_sequence(values, "tabulated h-function");
    return HFunction(TabulatedH{std::move(radii), std::move(values)});
}

double HFunction::operator()(double r) const
{
    return std::visit(overloaded{
                          [r](const ClosedFormH& c) { return c.h(r); },
                          [r](const StepH& s) { return step_eval(s, r); },
                          [r](const TabulatedH& t) { return table_eval(t, r); },
                      },
                      kind_);
}

double HFunction::left_limit(double r) const
{
    if (r <= 0.0) return 0.0;
    return (*this)(std::nextafter(r, 0.0));
}

double HFunction::inverse(double s) const
{
    if (s <= 0.0) return d_min_;
    if (s > 1.0) return std::numeric_limits<double>::infinity();
    return std::visit(overloaded{
                          [s](const ClosedFormH& c) { return c.inverse(s); },
                          [s](const StepH& st) {
                              auto it = std::lower_bound(st.values.begin(), st.values.end(), s);
                              return st.breakpoints[static_cast<std::size_t>(it - st.values.begin())];
                          },
                          [s](const TabulatedH& t) { return table_inverse(t, s); },
                      },
                      kind_);
}

std::string HFunction::describe() const
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&os](const ClosedFormH& c) {
                       os << "catalog:" << c.id;
                       for (const auto& [k, v] : c.params) os << ' ' << k << '=' << v;
                   },
                   [&os](const StepH& s) { os << "step(" << s.breakpoints.size() << " breakpoints)"; },
                   [&os](const TabulatedH& t) { os << "table(" << t.radii.size() << " rows)"; },
               },
               kind_);
    return os.str();
}

GInverse::GInverse(HFunction h, double cap)
    : h_(std::make_shared<const HFunction>(std::move(h))), cap_(cap), singular_(false)
{
    if (!(cap > 0.0)) throw std::invalid_argument("GInverse: cap must be positive");
    singular_ = !(h_->inverse(1.0) < cap_);
}

double GInverse::operator()(double s) const
{
    return std::min(h_->inverse(s), cap_);
}

double wrap(double x)
{
    // fmod is exact, so the reduction to (-1, 1] loses nothing.
    double y = std::fmod(x, 2.0);
    if (y > 1.0) y -= 2.0;
    else if (y <= -1.0) y += 2.0;
    return y;
}

double fold(double x)
{
    const double y = std::fmod(std::fabs(x), 2.0);
    return y <= 1.0 ? y : 2.0 - y;
}

double ginv(const HFunction& h, double s, double cap)
{
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("ginv: s = " + std::to_string(s) + " outside [0, 1]");
    return std::min(h.inverse(s), cap);
}

double periodic_extension(const GInverse& g, double x)
{
    return g(fold(x));
}

double log_g(const GInverse& g, double x)
{
    const double v = periodic_extension(g, x);
    const double lc = std::log(g.cap());
    if (!(v > 0.0)) return -lc;
    return std::clamp(std::log(v), -lc, lc);
}

namespace {

// Flags growth of tail integrals over shrinking decades [10^-k-1, 10^-k] next to an
// endpoint. A decade that reaches the cap is the last one compared; if the tails grew all
// the way up to it the growth is taken to continue.
template <class F>
bool tail_fails_to_decay(F&& piece)
{
    double prev = 0.0;
    int run = 0, ratios = 0;
    for (int k = 1; k <= 9; ++k) {
        const auto [tail, saturated] = piece(std::pow(10.0, -k), std::pow(10.0, -k - 1));
        if (k > 1) {
            const double ratio = prev > 0.0 ? tail / prev : 0.0;
            ++ratios;
            run = ratio > 0.5 ? run + 1 : 0;
            if (run >= 3) return true;
        }
        if (saturated) return ratios > 0 && run == ratios;
        prev = tail;
    }
    return false;
}

}  // namespace

LpEstimate lp_norm_estimate(const GInverse& g, double p, const TanhSinhGrid& grid)
{
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm_estimate: p must be positive");
    if (g.source()(0.0) > 0.0)
        throw std::domain_error("ln g is not locally integrable: g vanishes on (0, h(0)]");

    const double lc = std::log(g.cap());
    auto integrand = [&](double s) {
        const double v = g(s);
        const double l = v > 0.0 ? std::clamp(std::log(v), -lc, lc) : -lc;
        return std::pow(std::fabs(l), p);
    };

    std::vector<double> breaks{0.0};
    for (double j : g.jumps()) breaks.push_back(j);
    breaks.push_back(1.0);
    const double half = grid.integrate_pieces(breaks, integrand);

    LpEstimate out;
    out.p = p;
    out.norm = std::pow(2.0 * half, 1.0 / p);
    const double ceiling = std::pow(lc, p) * (1.0 - 1e-12);
    const bool top = tail_fails_to_decay([&](double outer, double inner) {
        return std::pair{grid.integrate(1.0 - outer, 1.0 - inner, integrand), integrand(1.0 - inner) >= ceiling};
    });
    const bool bottom = tail_fails_to_decay([&](double outer, double inner) {
        return std::pair{grid.integrate(inner, outer, integrand), integrand(inner) >= ceiling};
    });
    out.divergent = top || bottom || !std::isfinite(out.norm);
    return out;
}

MomentResult moment_from_h(const HFunction& h, double p, double r_max)
{
    if (!(p > 0.0)) throw std::invalid_argument("moment_from_h: p must be positive");
    if (!(r_max > h.d_min())) throw std::invalid_argument("moment_from_h: r_max must exceed d_min");

    static const TanhSinhGrid grid(500);

    const auto& kinks = h.radius_breaks();
    auto with_kinks = [&kinks](double a, double b) {
        std::vector<double> pts{a};
        for (double k : kinks)
            if (k > a && k < b) pts.push_back(k);
        pts.push_back(b);
        return pts;
    };

    MomentResult out;
    // Near the origin substitute r = first * v^{1/p}, which removes the r^{p-1} singularity.
    const double first = std::min(1.0, r_max);
    {
        std::vector<double> pts = with_kinks(0.0, first);
        for (double& v : pts) v = std::pow(v / first, p);
        pts.back() = 1.0;
        const double scale = std::pow(first, p);
        out.value += scale * grid.integrate_pieces(pts, [&](double v) {
            return 1.0 - h(first * std::pow(v, 1.0 / p));
        });
    }
    // Decades in log variables: r = e^u, dr = r du.
    double lo = first;
    while (lo < r_max) {
        const double hi = std::min(lo * 10.0, r_max);
        std::vector<double> pts = with_kinks(lo, hi);
        for (double& v : pts) v = std::log(v);
        const double piece = grid.integrate_pieces(pts, [&](double u) {
            const double r = std::exp(u);
            return p * std::pow(r, p) * (1.0 - h(r));
        });
        out.value += piece;
        if (hi == lo * 10.0) out.decade_integrals.push_back(piece);
        lo = hi;
    }

    int run = 0;
    for (std::size_t i = 0; i + 1 < out.decade_integrals.size(); ++i) {
        const double a = out.decade_integrals[i];
        const double ratio = a > 0.0 ? out.decade_integrals[i + 1] / a : 0.0;
        run = ratio > 0.5 ? run + 1 : 0;
        if (run >= 3) out.divergent = true;
    }
    return out;
}

}  // namespace hinv
