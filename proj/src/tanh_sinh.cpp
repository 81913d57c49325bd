#include "hinv/tanh_sinh.hpp"

#include <cstdio>
#include <numbers>

namespace hinv {

namespace {

// 2^-51: the smallest complement for which 1 - c is still below 1 in double.
constexpr double kMinComplement = 4.440892098500626e-16;

}  // namespace

TanhSinhGrid::TanhSinhGrid(int m) : m_(m), step_(0.0)
{
    if (m < 1) throw std::invalid_argument("TanhSinhGrid: M must be positive");
    step_ = 2.0 / m;
    constexpr double half_pi = std::numbers::pi / 2.0;

    std::vector<double> t_pos, c_pos, w_pos;
    for (int k = 1;; ++k) {
        const double s = k * step_;
        const double u = half_pi * std::sinh(s);
        const double e = std::exp(-2.0 * u);
        const double comp = 2.0 * e / (1.0 + e);
        if (comp < kMinComplement) break;
        if (!t_pos.empty() && !(1.0 - comp > t_pos.back())) break;  // nodes would collide at 1
        const double ch = std::cosh(u);
        t_pos.push_back(1.0 - comp);
        c_pos.push_back(comp);
        w_pos.push_back(step_ * half_pi * std::cosh(s) / (ch * ch));
    }

    const std::size_t n = t_pos.size();
    nodes_.reserve(2 * n + 1);
    for (std::size_t i = n; i-- > 0;) {
        nodes_.push_back(-t_pos[i]);
        complements_.push_back(c_pos[i]);
        weights_.push_back(w_pos[i]);
    }
    nodes_.push_back(0.0);
    complements_.push_back(1.0);
    weights_.push_back(step_ * half_pi);
    for (std::size_t i = 0; i < n; ++i) {
        nodes_.push_back(t_pos[i]);
        complements_.push_back(c_pos[i]);
        weights_.push_back(w_pos[i]);
    }
}

std::string TanhSinhGrid::to_csv() const
{
    std::string out = "k,node,complement,weight\n";
    const long half = static_cast<long>(nodes_.size() / 2);
    char buf[128];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g\n", static_cast<long>(i) - half,
                      nodes_[i], complements_[i], weights_[i]);
        out += buf;
    }
    return out;
}

void TanhSinhGrid::throw_non_finite(std::size_t k, double x, double v)
{
    std::ostringstream os;
    os << "quadrature integrand is not finite at node " << k << " (x = " << x << ", value = " << v
       << ")";
    throw std::domain_error(os.str());
}

}  // namespace hinv
