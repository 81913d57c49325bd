#include "hinv/catalog.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace hinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// sec(pi s / 2) written through the complement so it stays accurate as s -> 1.
double sec_half_pi(double s)
{
    if (s >= 1.0) return kInf;
    return 1.0 / std::sin(0.5 * kPi * (1.0 - s));
}

ParamMap merged(const std::string& id, const ParamMap& defaults, const ParamMap& given)
{
    ParamMap out = defaults;
    for (const auto& [k, v] : given) {
        if (!defaults.count(k)) throw std::invalid_argument("catalog entry '" + id + "' has no parameter '" + k + "'");
        out[k] = v;
    }
    return out;
}

double require_positive(const ParamMap& p, const std::string& key, const std::string& id)
{
    const double v = p.at(key);
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument("catalog entry '" + id + "': parameter " + key + " must be positive");
    return v;
}

CatalogEntry make_disk()
{
    ClosedFormH c;
    c.id = "disk";
    c.h = [](double r) { return r >= 1.0 ? 1.0 : 0.0; };
    c.inverse = [](double s) { return s <= 1.0 ? 1.0 : kInf; };
    c.d_min = 1.0;
    c.radius_breaks = {1.0};
    auto g = c.inverse;
    return {"disk", HFunction::closed_form(std::move(c)), g, [](double) { return 0.0; }, {},
            "unit disk, base point 0: exit radius is identically 1"};
}

CatalogEntry make_omega(double n, const std::string& id, const ParamMap& params)
{
    ClosedFormH c;
    c.id = id;
    c.params = params;
    c.h = [n](double r) {
        if (r < 1.0) return 0.0;
        return (2.0 / kPi) * std::atan(std::sqrt(std::pow(r, n) - 1.0));
    };
    c.inverse = [n](double s) { return std::pow(sec_half_pi(s), 2.0 / n); };
    c.d_min = 1.0;
    c.radius_breaks = {1.0};
    auto g = c.inverse;
    auto hilbert = [n](double x) { return -(kPi / n) * wrap(x); };
    std::string notes = id == "half-plane"
                            ? "upper half-plane, base point i: h(r) = (2/pi) arctan sqrt(r^2 - 1)"
                            : "plane minus n equally spaced radial rays |z| >= 1";
    return {id, HFunction::closed_form(std::move(c)), g, hilbert, params, notes};
}

CatalogEntry make_two_step()
{
    ClosedFormH c;
    c.id = "two-step";
    c.h = [](double r) { return r < 1.0 ? 0.0 : (r < 2.0 ? 0.5 : 1.0); };
    c.inverse = [](double s) { return s <= 0.5 ? 1.0 : (s <= 1.0 ? 2.0 : kInf); };
    c.d_min = 1.0;
    c.g_jumps = {0.5};
    c.radius_breaks = {1.0, 2.0};
    auto g = c.inverse;
    auto hilbert = [](double x) { return std::log(2.0) * hilbert_of_periodic_indicator(0.5, 1.5, x); };
    return {"two-step", HFunction::closed_form(std::move(c)), g, hilbert, {},
            "circle domain: half the exit mass at radius 1, half at radius 2"};
}

CatalogEntry make_custom(double a, double n, const ParamMap& params)
{
    const double scale = 1.0 / std::sqrt(1.0 + 1.0 / a);
    ClosedFormH c;
    c.id = "custom";
    c.params = params;
    c.inverse = [a, n, scale](double s) {
        if (s >= 1.0) return kInf;
        return scale * std::sqrt(1.0 / (a * std::pow(1.0 - s, n)) + 1.0);
    };
    // Solving g(s) = r gives s = 1 - ((1 + a) r^2 - a)^(-1/n).
    c.h = [a, n](double r) {
        if (r < 1.0) return 0.0;
        return 1.0 - std::pow((1.0 + a) * r * r - a, -1.0 / n);
    };
    c.d_min = 1.0;
    c.radius_breaks = {1.0};
    auto g = c.inverse;
    return {"custom", HFunction::closed_form(std::move(c)), g, nullptr, params,
            "g(s) = (1 + 1/a)^(-1/2) sqrt(1/(a (1 - s)^n) + 1); no closed-form Hilbert transform"};
}

}  // namespace

double hilbert_of_periodic_indicator(double a, double b, double x)
{
    const double num = std::sin(0.5 * kPi * (x - a));
    const double den = std::sin(0.5 * kPi * (x - b));
    return std::log(std::fabs(num / den)) / kPi;
}

std::vector<std::string> catalog_ids()
{
    return {"disk", "half-plane", "omega-n", "two-step", "custom"};
}

ParamMap catalog_defaults(const std::string& id)
{
    if (id == "omega-n") return {{"n", 2.0}};
    if (id == "custom") return {{"a", 100.0}, {"n", 4.0}};
    if (id == "disk" || id == "half-plane" || id == "two-step") return {};
    std::ostringstream os;
    os << "unknown catalog id '" << id << "'; known ids:";
    for (const auto& k : catalog_ids()) os << ' ' << k;
    throw std::invalid_argument(os.str());
}

CatalogEntry catalog_get(const std::string& id, const ParamMap& params)
{
    const ParamMap p = merged(id, catalog_defaults(id), params);
    if (id == "disk") return make_disk();
    if (id == "half-plane") return make_omega(2.0, id, p);
    if (id == "omega-n") return make_omega(require_positive(p, "n", id), id, p);
    if (id == "two-step") return make_two_step();
    return make_custom(require_positive(p, "a", id), require_positive(p, "n", id), p);
}

}  // namespace hinv
