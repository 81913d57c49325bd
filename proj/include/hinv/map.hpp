#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hinv/catalog.hpp"
#include "hinv/hfunction.hpp"
#include "hinv/periodic.hpp"
#include "hinv/segments.hpp"
#include "hinv/tanh_sinh.hpp"

namespace hinv {

/// Positive rational p/q in lowest terms.
struct Rational {
    long p = 1;
    long q = 1;

    Rational() = default;
    Rational(long num, long den);
    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    std::string str() const;
};

/// Nearest rational with denominator at most max_q.
Rational snap_to_rational(double v, long max_q = 64);

/// Parses "p/q" exactly or a decimal snapped to q <= 64; `snapped` reports whether snapping changed the value.
Rational parse_alpha(const std::string& text, bool* snapped = nullptr);

class HilbertCache;

/// Tabulated data for the interior at a fixed x: the Poisson node layout plus
/// ln g~ and H ln g~ on those nodes.
struct InteriorColumn {
    PoissonNodes layout;
    std::vector<double> log_values;
    std::vector<double> hilbert_values;
};

/// The holomorphic map f(z) = exp(u + i v + i alpha pi z) on the upper half-plane,
/// with u = P_y * ln g~ and v = P_y * (H ln g~).
struct MapSpec {
    std::shared_ptr<const GInverse> g;
    Rational alpha;
    std::shared_ptr<const TanhSinhGrid> grid;
    PeriodicKernelConfig cfg;
    PeriodicFn analytic_hilbert;  // empty: H ln g~ is computed by quadrature
    std::vector<double> breaks;   // singular and jump points of ln g~ on (-1, 1]
    std::vector<std::string> warnings;
    std::shared_ptr<HilbertCache> cache;

    /// lcm(2, 2/alpha) = 2q.
    double joint_period() const { return 2.0 * static_cast<double>(alpha.q); }
    double log_g(double x) const;
    /// H ln g~ at x: closed form when available, otherwise memoized quadrature.
    double hilbert(double x) const;
    /// Fills the memo for a batch of positions (parallel, idempotent).
    void prefetch(const std::vector<double>& xs, int workers) const;
    std::shared_ptr<const InteriorColumn> column(double x, int workers = 1) const;
    bool numeric_hilbert() const { return !analytic_hilbert; }
};

/// Thread-safe memo of numeric Hilbert values and interior columns.
class HilbertCache {
public:
    std::optional<double> find(double x) const;
    void insert(double x, double value);
    std::shared_ptr<const InteriorColumn> find_column(double x) const;
    void insert_column(double x, std::shared_ptr<const InteriorColumn> col);
    std::size_t size() const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_ = make_impl();
    static std::shared_ptr<Impl> make_impl();
};

struct BuildOptions {
    PeriodicFn analytic_hilbert;        // optional closed form of H ln g~
    bool check_resolution = true;       // warn when M looks too small for a numeric transform
};

MapSpec build_map(const GInverse& g, Rational alpha, const TanhSinhGrid& grid,
                  const PeriodicKernelConfig& cfg, BuildOptions opts = {});

/// Convenience: catalog entry plus its closed-form Hilbert transform when it has one.
MapSpec build_map(const CatalogEntry& entry, Rational alpha, const TanhSinhGrid& grid,
                  const PeriodicKernelConfig& cfg, double cap = kDefaultCap);

/// Closed form of H ln g~ for a step h-function (sum of periodized indicator transforms).
PeriodicFn step_hilbert(const HFunction& h, double cap = kDefaultCap);

struct MapValue {
    ComplexPoint w;
    bool saturated = false;
};

/// f(z) for Im z >= 0; the boundary formula is used on the real axis.
MapValue eval_map(const MapSpec& spec, ComplexPoint z);

/// u and v separately (the harmonic pair before adding k(z) = i alpha pi z).
std::pair<double, double> eval_harmonic_pair(const MapSpec& spec, ComplexPoint z);

struct BoundaryTrace {
    std::vector<ComplexPoint> points;
    std::vector<double> params;
    std::vector<int> component_labels;
    std::vector<int> piece_labels;   // consecutive points of one piece are joined
    std::vector<char> piece_closed;  // per piece: last point joins the first
    double joint_period = 2.0;

    int component_count() const;
    std::vector<Segment> segments() const;
    Box bounds() const;
};

struct TraceOptions {
    double far_radius = 1e4;   // extend pieces toward singular ends until |f| reaches this
    int workers = 1;
};

BoundaryTrace trace_boundary(const MapSpec& spec, int n_points, TraceOptions opts = {});

struct InteriorLine {
    double x0 = 0.0;
    std::vector<double> t;
    std::vector<ComplexPoint> points;
};

/// f(x0 + i t) for n log-spaced t in (1e-3, y_max].
InteriorLine trace_interior_line(const MapSpec& spec, double x0, double y_max, int n, int workers = 1);

struct Crossing {
    double x0 = 0.0;
    double t = 0.0;
    std::size_t boundary_segment = 0;
    ComplexPoint point;
};

struct CoveringReport {
    bool is_candidate_cover = true;
    std::vector<Crossing> crossings;
    int lines = 0;
    int points_per_line = 0;
    std::size_t boundary_points = 0;
};

/// Heuristic check of f(U) and f(dU) being disjoint: crossings between a lattice
/// of interior lines and the traced boundary.
CoveringReport covering_diagnostic(const MapSpec& spec, int resolution, int workers = 1);

// Export.
std::string trace_to_csv(const BoundaryTrace& trace);
BoundaryTrace trace_from_csv(const std::string& text);
std::string line_to_csv(const InteriorLine& line);
std::string trace_to_svg(const BoundaryTrace& trace, const std::vector<InteriorLine>& lines,
                         double view_radius = 0.0);

}  // namespace hinv
