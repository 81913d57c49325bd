#pragma once

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hinv {

/// Double-exponential (tanh-sinh) rule on (-1, 1).
///
/// Nodes are t_k = tanh((pi/2) sinh(k h)) with spacing h = 2/M. The index range
/// runs past |k| = M until 1 - |t_k| drops below 2^-51, so every node stays
/// strictly inside (-1, 1) in double precision and the truncated tail mass is
/// below 1e-15. The distance of each node to its nearest endpoint is stored
/// separately so that subinterval maps keep full relative precision there.
class TanhSinhGrid {
public:
    explicit TanhSinhGrid(int m = 1000);

    int m() const { return m_; }
    double step() const { return step_; }
    std::span<const double> nodes() const { return nodes_; }
    std::span<const double> weights() const { return weights_; }
    /// 1 - |t_k|, exact to working precision.
    std::span<const double> complements() const { return complements_; }
    std::size_t size() const { return nodes_.size(); }

    /// Position of node k mapped linearly onto [a, b].
    double map_node(std::size_t k, double a, double b) const
    {
        const double half = 0.5 * (b - a) * complements_[k];
        return nodes_[k] < 0.0 ? a + half : b - half;
    }

    /// Distance of mapped node k from the nearer end, signed: positive from a, negative from b.
    double offset_from_end(std::size_t k, double a, double b) const
    {
        const double half = 0.5 * (b - a) * complements_[k];
        return nodes_[k] < 0.0 ? half : -half;
    }

    /// sum_k w_k f(t_k); throws naming the node if f is not finite there.
    template <class F>
    double integrate(F&& f) const
    {
        double sum = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double v = f(nodes_[k]);
            if (!std::isfinite(v)) throw_non_finite(k, nodes_[k], v);
            sum += weights_[k] * v;
        }
        return sum;
    }

    /// Integral of f over [a, b] after the linear change of variables.
    template <class F>
    double integrate(double a, double b, F&& f) const
    {
        if (a == b) return 0.0;
        double sum = 0.0;
        for (std::size_t k = 0; k < nodes_.size(); ++k) {
            const double x = map_node(k, a, b);
            const double v = f(x);
            if (!std::isfinite(v)) throw_non_finite(k, x, v);
            sum += weights_[k] * v;
        }
        return 0.5 * (b - a) * sum;
    }

    /// Integral over consecutive pieces of a sorted breakpoint list.
    template <class F>
    double integrate_pieces(std::span<const double> breaks, F&& f) const
    {
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
            sum += integrate(breaks[i], breaks[i + 1], f);
        return sum;
    }

    /// CSV dump "k,node,complement,weight".
    std::string to_csv() const;

private:
    [[noreturn]] static void throw_non_finite(std::size_t k, double x, double v);

    int m_;
    double step_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> complements_;
};

/// Free-function form of TanhSinhGrid::integrate over (-1, 1).
template <class F>
double quad(const TanhSinhGrid& grid, F&& integrand)
{
    return grid.integrate(std::forward<F>(integrand));
}

}  // namespace hinv
