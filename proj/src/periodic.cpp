#include "hinv/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hinv/hfunction.hpp"

namespace hinv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kKernelSaturation = 700.0;

double reduce(double v)
{
    if (v > 1.0) return v - 2.0;
    if (v <= -1.0) return v + 2.0;
    return v;
}

void push_unique_sorted(std::vector<double>& v)
{
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

void PeriodicKernelConfig::validate() const
{
    if (!(epsilon > 0.0)) throw std::invalid_argument("PeriodicKernelConfig: epsilon must be positive");
    if (oracle_terms < 1) throw std::invalid_argument("PeriodicKernelConfig: oracle_terms must be >= 1");
}

double periodic_poisson_kernel(double y, double theta)
{
    if (!(y > 0.0)) throw std::domain_error("periodic_poisson_kernel: y must be positive");
    if (kPi * y > kKernelSaturation) return 0.5;
    // cosh(a) - cos(b) = 2 sinh^2(a/2) + 2 sin^2(b/2), free of cancellation near the spike.
    const double sh = std::sinh(0.5 * kPi * y);
    const double sn = std::sin(0.5 * kPi * theta);
    return 0.5 * std::sinh(kPi * y) / (2.0 * (sh * sh + sn * sn));
}

PoissonNodes poisson_nodes(double x, const TanhSinhGrid& grid, std::span<const double> breaks)
{
    PoissonNodes out;
    out.x = wrap(x);
    std::vector<double> edges{-1.0, 1.0, out.x};
    for (double b : breaks) {
        const double r = wrap(b);
        if (r > -1.0 && r < 1.0) edges.push_back(r);
    }
    push_unique_sorted(edges);

    const std::size_t n = grid.size();
    out.positions.reserve(n * (edges.size() - 1));
    out.offsets.reserve(n * (edges.size() - 1));
    out.weights.reserve(n * (edges.size() - 1));
    const auto w = grid.weights();
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i], b = edges[i + 1];
        const double base_a = reduce(out.x - a);
        const double base_b = reduce(out.x - b);
        for (std::size_t k = 0; k < n; ++k) {
            const double d = grid.offset_from_end(k, a, b);
            out.positions.push_back(grid.map_node(k, a, b));
            out.offsets.push_back(d > 0.0 ? base_a - d : base_b - d);
            out.weights.push_back(0.5 * (b - a) * w[k]);
        }
    }
    return out;
}

double poisson_integral(const PoissonNodes& layout, std::span<const double> values, double y)
{
    if (!(y > 0.0)) throw std::domain_error("poisson_integral: y must be positive");
    if (values.size() != layout.positions.size())
        throw std::invalid_argument("poisson_integral: tabulated values do not match the node layout");
    double sum = 0.0;
    if (kPi * y > kKernelSaturation) {
        for (std::size_t j = 0; j < values.size(); ++j) sum += layout.weights[j] * values[j];
        return 0.5 * sum;
    }
    const double sh = std::sinh(0.5 * kPi * y);
    const double sh2 = sh * sh;
    const double num = 0.25 * std::sinh(kPi * y);
    for (std::size_t j = 0; j < values.size(); ++j) {
        const double sn = std::sin(0.5 * kPi * layout.offsets[j]);
        sum += layout.weights[j] * values[j] * (num / (sh2 + sn * sn));
    }
    if (!std::isfinite(sum)) {
        std::ostringstream os;
        os << "poisson_integral: non-finite result at x = " << layout.x << ", y = " << y;
        throw std::domain_error(os.str());
    }
    return sum;
}

double poisson_integral(const PeriodicFn& f, double x, double y, const TanhSinhGrid& grid,
                        std::span<const double> breaks)
{
    const PoissonNodes layout = poisson_nodes(x, grid, breaks);
    std::vector<double> values(layout.positions.size());
    for (std::size_t j = 0; j < values.size(); ++j) {
        values[j] = f(layout.positions[j]);
        if (!std::isfinite(values[j])) {
            std::ostringstream os;
            os << "poisson_integral: integrand not finite at t = " << layout.positions[j];
            throw std::domain_error(os.str());
        }
    }
    return poisson_integral(layout, values, y);
}

std::vector<double> hilbert_split_points(double x, double epsilon, std::span<const double> breaks)
{
    std::vector<double> out{epsilon, 1.0};
    for (double b : breaks) {
        const double t = std::fabs(wrap(x - b));
        if (t > epsilon && t < 1.0) out.push_back(t);
    }
    push_unique_sorted(out);
    return out;
}

double hilbert_transform(const PeriodicFn& f, double x, const TanhSinhGrid& grid,
                         const PeriodicKernelConfig& cfg, std::span<const double> breaks)
{
    cfg.validate();
    const auto edges = hilbert_split_points(x, cfg.epsilon, breaks);
    const double integral = grid.integrate_pieces(edges, [&](double t) {
        return (f(x - t) - f(x + t)) / std::tan(0.5 * kPi * t);
    });
    const double result = 0.5 * integral;
    if (!std::isfinite(result)) {
        std::ostringstream os;
        os << "hilbert_transform: non-finite result at x = " << x;
        throw std::domain_error(os.str());
    }
    return result;
}

double lattice_sum_oracle(LatticeKind kind, std::span<const double> args, int terms)
{
    if (terms < 1) throw std::invalid_argument("lattice_sum_oracle: terms must be >= 1");
    if (kind == LatticeKind::poisson) {
        if (args.size() != 2) throw std::invalid_argument("poisson lattice sum takes (y, theta)");
        const double y = args[0], theta = args[1];
        double sum = y / (theta * theta + y * y);
        // Pair +k and -k and accumulate smallest terms first.
        for (int k = terms; k >= 1; --k) {
            const double a = theta - 2.0 * k, b = theta + 2.0 * k;
            sum += y / (a * a + y * y) + y / (b * b + y * y);
        }
        return sum / kPi;
    }
    if (args.size() != 1) throw std::invalid_argument("cotangent lattice sum takes (t)");
    const double t = args[0];
    double sum = 0.0;
    for (int k = terms; k >= 1; --k) sum += 1.0 / (t - 2.0 * k) + 1.0 / (t + 2.0 * k);
    return sum;
}

}  // namespace hinv
