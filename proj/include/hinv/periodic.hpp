#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hinv/tanh_sinh.hpp"

namespace hinv {

/// A function on the real line with period 2 (a function on T = R / 2Z).
using PeriodicFn = std::function<double(double)>;

struct PeriodicKernelConfig {
    double epsilon = 1e-12;  // principal-value exclusion radius
    int oracle_terms = 10000;

    void validate() const;
};

/// (1/2) sinh(pi y) / (cosh(pi y) - cos(pi theta)); the limit 1/2 once pi y > 700.
double periodic_poisson_kernel(double y, double theta);

/// Quadrature layout of the Poisson integral at a fixed x.
///
/// The period [-1, 1] is split at x (the kernel spike) and at every breakpoint
/// of the integrand, so all of them sit at tanh-sinh endpoints. The layout
/// depends only on x, which lets callers tabulate integrands once and reuse
/// them for every y.
struct PoissonNodes {
    double x = 0.0;                 // reduced to (-1, 1]
    std::vector<double> positions;  // t_j
    std::vector<double> offsets;    // x - t_j reduced to (-1, 1], exact near the split
    std::vector<double> weights;
};

/// breaks: singular or jump points of the integrand, given anywhere on the line.
PoissonNodes poisson_nodes(double x, const TanhSinhGrid& grid, std::span<const double> breaks = {});

/// Poisson integral from values tabulated on the nodes of `layout`.
double poisson_integral(const PoissonNodes& layout, std::span<const double> values, double y);

double poisson_integral(const PeriodicFn& f, double x, double y, const TanhSinhGrid& grid,
                        std::span<const double> breaks = {});

/// Periodic Hilbert transform (1/2) p.v. int_T f(t) cot((pi/2)(x - t)) dt, evaluated as
/// (1/2) int_eps^1 (f(x - t) - f(x + t)) cot(pi t / 2) dt with the t-range split
/// wherever x +- t meets a breakpoint of f.
double hilbert_transform(const PeriodicFn& f, double x, const TanhSinhGrid& grid,
                         const PeriodicKernelConfig& cfg, std::span<const double> breaks = {});

/// Distinct breakpoints in t of the symmetrized Hilbert integrand at x.
std::vector<double> hilbert_split_points(double x, double epsilon, std::span<const double> breaks);

enum class LatticeKind { poisson, cotangent };

/// Truncated lattice sums behind the closed-form kernels.
///   poisson:   args = {y, theta}: (1/pi) sum_{|k|<=terms} y / ((theta - 2k)^2 + y^2)
///   cotangent: args = {t}:        sum_{0<|k|<=terms} 1 / (t - 2k)
double lattice_sum_oracle(LatticeKind kind, std::span<const double> args, int terms);

}  // namespace hinv
