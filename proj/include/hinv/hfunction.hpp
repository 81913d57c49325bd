#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hinv {

class TanhSinhGrid;

/// Numerical ceiling used in place of an infinite generalized inverse.
inline constexpr double kDefaultCap = 1e300;

using ParamMap = std::map<std::string, double>;

/// Closed-form h-function supplied by a catalog entry.
struct ClosedFormH {
    std::string id;
    ParamMap params;
    std::function<double(double)> h;        // right-continuous CDF of the exit radius
    std::function<double(double)> inverse;  // generalized inverse on [0, 1]; +inf allowed
    double d_min = 0.0;
    std::vector<double> g_jumps;            // s in (0, 1) where the inverse jumps
    std::vector<double> radius_breaks;      // radii where h has a kink or jump
};

/// Right-continuous step function: h(r) = values[i] on [breakpoints[i], breakpoints[i+1]).
struct StepH {
    std::vector<double> breakpoints;
    std::vector<double> values;
};

/// Sorted (r, h(r)) pairs, linearly interpolated; h = 0 below the first radius.
struct TabulatedH {
    std::vector<double> radii;
    std::vector<double> values;
};

/// Distribution function of an exit radius.
///
/// Construction validates monotonicity and range; every instance is immutable.
class HFunction {
public:
    using Kind = std::variant<ClosedFormH, StepH, TabulatedH>;

    static HFunction closed_form(ClosedFormH c);
    static HFunction step(std::vector<double> breakpoints, std::vector<double> values);
    static HFunction tabulated(std::vector<double> radii, std::vector<double> values);

    double operator()(double r) const;
    /// Left limit h(r-).
    double left_limit(double r) const;
    /// inf{ r >= 0 : h(r) >= s } for s in (0, 1]; the right limit d_min at s = 0.
    /// Returns +inf when h never reaches s.
    double inverse(double s) const;

    double d_min() const { return d_min_; }
    /// Values of s in (0, 1) at which the inverse is discontinuous.
    const std::vector<double>& g_jumps() const { return g_jumps_; }
    /// Radii where h has a kink or jump (quadrature split points).
    const std::vector<double>& radius_breaks() const { return radius_breaks_; }
    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    explicit HFunction(Kind kind);

    Kind kind_;
    double d_min_ = 0.0;
    std::vector<double> g_jumps_;
    std::vector<double> radius_breaks_;
};

/// Generalized inverse of an h-function, capped at a finite ceiling.
class GInverse {
public:
    explicit GInverse(HFunction h, double cap = kDefaultCap);

    /// g(s) for s in [0, 1], min(inverse, cap).
    double operator()(double s) const;
    const HFunction& source() const { return *h_; }
    double cap() const { return cap_; }
    /// True when g(1) is at the cap, i.e. the target domain is unbounded.
    bool singular() const { return singular_; }
    const std::vector<double>& jumps() const { return h_->g_jumps(); }

private:
    std::shared_ptr<const HFunction> h_;
    double cap_;
    bool singular_;
};

/// Maps x onto [0, 1] so that the composed function is even and 2-periodic.
double fold(double x);
/// Reduces x to the fundamental domain (-1, 1] of the period-2 torus.
double wrap(double x);

double ginv(const HFunction& h, double s, double cap = kDefaultCap);
double periodic_extension(const GInverse& g, double x);
/// min(ln g~(x), ln cap), floored at -ln cap.
double log_g(const GInverse& g, double x);

struct LpEstimate {
    double p = 0.0;
    double norm = 0.0;
    bool divergent = false;
};

/// Quadrature estimate of ||ln g~||_p over (-1, 1) with an endpoint tail-decay check.
/// Throws when g vanishes on a set of positive measure.
LpEstimate lp_norm_estimate(const GInverse& g, double p, const TanhSinhGrid& grid);

struct MomentResult {
    double value = 0.0;
    bool divergent = false;
    std::vector<double> decade_integrals;
};

/// Layer-cake moment int_0^{r_max} p r^{p-1} (1 - h(r)) dr with a decade-decay divergence flag.
MomentResult moment_from_h(const HFunction& h, double p, double r_max);

// I/O for user-supplied h-functions.
HFunction read_h_table_csv(const std::string& path);
HFunction parse_h_table_csv(const std::string& text);
HFunction read_step_json(const std::string& path);
HFunction parse_step_json(const std::string& text);

}  // namespace hinv
