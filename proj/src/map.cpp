#include "hinv/map.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "hinv/parallel.hpp"

namespace hinv {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t key_of(double x)
{
    if (x == 0.0) x = 0.0;  // merge -0.0
    return std::bit_cast<std::uint64_t>(x);
}

}  // namespace

// ---------------------------------------------------------------- Rational

Rational::Rational(long num, long den) : p(num), q(den)
{
    if (num <= 0 || den <= 0) throw std::invalid_argument("alpha must be a positive rational p/q");
    const long d = std::gcd(num, den);
    p /= d;
    q /= d;
}

std::string Rational::str() const
{
    return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
}

Rational snap_to_rational(double v, long max_q)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("alpha must be positive and finite");
    long best_p = 1, best_q = 1;
    double best_err = std::numeric_limits<double>::infinity();
    for (long q = 1; q <= max_q; ++q) {
        const long p = std::max(1L, std::lround(v * static_cast<double>(q)));
        const double err = std::fabs(v - static_cast<double>(p) / static_cast<double>(q));
        if (err < best_err) {
            best_err = err;
            best_p = p;
            best_q = q;
        }
    }
    return Rational(best_p, best_q);
}

Rational parse_alpha(const std::string& text, bool* snapped)
{
    auto parse_long = [&text](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != s.size()) throw std::invalid_argument("cannot parse alpha '" + text + "'");
        return v;
    };
    if (snapped) *snapped = false;
    const auto slash = text.find('/');
    if (slash != std::string::npos)
        return Rational(parse_long(text.substr(0, slash)), parse_long(text.substr(slash + 1)));

    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw std::invalid_argument("cannot parse alpha '" + text + "'");
    const Rational r = snap_to_rational(v);
    if (snapped) *snapped = std::fabs(r.value() - v) > 1e-12 * v;
    return r;
}

// ---------------------------------------------------------------- cache

struct HilbertCache::Impl {
    mutable std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, double> values;
    std::unordered_map<std::uint64_t, std::shared_ptr<const InteriorColumn>> columns;
};

std::shared_ptr<HilbertCache::Impl> HilbertCache::make_impl() { return std::make_shared<Impl>(); }

std::optional<double> HilbertCache::find(double x) const
{
    std::shared_lock lock(impl_->mutex);
    auto it = impl_->values.find(key_of(x));
    if (it == impl_->values.end()) return std::nullopt;
    return it->second;
}

void HilbertCache::insert(double x, double value)
{
    std::unique_lock lock(impl_->mutex);
    impl_->values.emplace(key_of(x), value);
}

std::shared_ptr<const InteriorColumn> HilbertCache::find_column(double x) const
{
    std::shared_lock lock(impl_->mutex);
    auto it = impl_->columns.find(key_of(x));
    return it == impl_->columns.end() ? nullptr : it->second;
}

void HilbertCache::insert_column(double x, std::shared_ptr<const InteriorColumn> col)
{
    std::unique_lock lock(impl_->mutex);
    impl_->columns.emplace(key_of(x), std::move(col));
}

std::size_t HilbertCache::size() const
{
    std::shared_lock lock(impl_->mutex);
    return impl_->values.size();
}

// ---------------------------------------------------------------- MapSpec

double MapSpec::log_g(double x) const { return hinv::log_g(*g, x); }

namespace {

double hilbert_by_quadrature(const MapSpec& spec, double x, const TanhSinhGrid& grid)
{
    const GInverse& g = *spec.g;
    return hilbert_transform([&g](double t) { return hinv::log_g(g, t); }, x, grid, spec.cfg, spec.breaks);
}

// Nodes next to a breakpoint can round onto it, where a closed form has a
// logarithmic pole; the neighbouring double is used instead.
double finite_near(const PeriodicFn& f, double t)
{
    double v = f(t);
    if (std::isfinite(v)) return v;
    v = f(std::nextafter(t, std::numeric_limits<double>::infinity()));
    if (std::isfinite(v)) return v;
    return f(std::nextafter(t, -std::numeric_limits<double>::infinity()));
}

}  // namespace

double MapSpec::hilbert(double x) const
{
    if (analytic_hilbert) return analytic_hilbert(x);
    const double xr = wrap(x);
    if (auto hit = cache->find(xr)) return *hit;
    const double v = hilbert_by_quadrature(*this, xr, *grid);
    cache->insert(xr, v);
    return v;
}

void MapSpec::prefetch(const std::vector<double>& xs, int workers) const
{
    if (analytic_hilbert) return;
    std::vector<double> todo;
    for (double x : xs) {
        const double xr = wrap(x);
        if (!cache->find(xr)) todo.push_back(xr);
    }
    std::sort(todo.begin(), todo.end());
    todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
    parallel_chunks(todo.size(), workers, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t i = b; i < e; ++i) cache->insert(todo[i], hilbert_by_quadrature(*this, todo[i], *grid));
    });
}

std::shared_ptr<const InteriorColumn> MapSpec::column(double x, int workers) const
{
    const double xr = wrap(x);
    if (auto hit = cache->find_column(xr)) return hit;
    auto col = std::make_shared<InteriorColumn>();
    col->layout = poisson_nodes(xr, *grid, breaks);
    const auto& pos = col->layout.positions;
    col->log_values.resize(pos.size());
    col->hilbert_values.resize(pos.size());
    for (std::size_t j = 0; j < pos.size(); ++j) col->log_values[j] = log_g(pos[j]);
    if (analytic_hilbert) {
        for (std::size_t j = 0; j < pos.size(); ++j) col->hilbert_values[j] = finite_near(analytic_hilbert, pos[j]);
    } else {
        parallel_chunks(pos.size(), workers, [&](std::size_t b, std::size_t e, int) {
            for (std::size_t j = b; j < e; ++j) col->hilbert_values[j] = hilbert_by_quadrature(*this, pos[j], *grid);
        });
    }
    cache->insert_column(xr, col);
    return col;
}

// ---------------------------------------------------------------- build

PeriodicFn step_hilbert(const HFunction& h, double cap)
{
    if (!std::holds_alternative<StepH>(h.kind()))
        throw std::invalid_argument("step_hilbert: h-function is not a step function");
    const auto& jumps = h.g_jumps();
    std::vector<double> cuts{0.0};
    cuts.insert(cuts.end(), jumps.begin(), jumps.end());
    cuts.push_back(1.0);
    std::vector<double> levels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double v = std::min(h.inverse(0.5 * (cuts[i] + cuts[i + 1])), cap);
        if (!(v > 0.0)) throw std::domain_error("step_hilbert: g vanishes on a set of positive measure");
        levels.push_back(std::log(v));
    }
    std::vector<std::pair<double, double>> terms;  // (jump location s, level increase)
    for (std::size_t j = 0; j < jumps.size(); ++j) terms.emplace_back(jumps[j], levels[j + 1] - levels[j]);
    return [terms](double x) {
        double sum = 0.0;
        for (const auto& [s, d] : terms) sum += d * hilbert_of_periodic_indicator(s, 2.0 - s, x);
        return sum;
    };
}

MapSpec build_map(const GInverse& g, Rational alpha, const TanhSinhGrid& grid,
                  const PeriodicKernelConfig& cfg, BuildOptions opts)
{
    cfg.validate();
    MapSpec spec;
    spec.g = std::make_shared<const GInverse>(g);
    spec.alpha = alpha;
    spec.grid = std::make_shared<const TanhSinhGrid>(grid);
    spec.cfg = cfg;
    spec.analytic_hilbert = std::move(opts.analytic_hilbert);
    spec.cache = std::make_shared<HilbertCache>();

    spec.breaks = {0.0, 1.0};
    for (double s : g.jumps()) {
        spec.breaks.push_back(s);
        spec.breaks.push_back(-s);
    }
    std::sort(spec.breaks.begin(), spec.breaks.end());

    // Integrability hypothesis: ln g in L^p for some p > 1.
    bool any_finite = false;
    for (double p : {1.1, 1.5, 2.0}) {
        const LpEstimate est = lp_norm_estimate(g, p, grid);
        if (!est.divergent) any_finite = true;
    }
    if (!any_finite)
        spec.warnings.push_back("ln g does not appear to lie in L^p for any tested p in {1.1, 1.5, 2}");

    if (!spec.analytic_hilbert && opts.check_resolution && grid.m() >= 8) {
        const TanhSinhGrid coarse(grid.m() / 2);
        double worst = 0.0;
        for (double x : {0.25, 0.6, 0.95}) {
            const double fine = hilbert_by_quadrature(spec, x, grid);
            const double rough = hilbert_by_quadrature(spec, x, coarse);
            worst = std::max(worst, std::fabs(fine - rough));
        }
        if (worst > 1e-6) {
            std::ostringstream os;
            os << "numeric Hilbert transform changes by " << worst << " between M = " << grid.m() / 2
               << " and M = " << grid.m() << "; consider raising M";
            spec.warnings.push_back(os.str());
        }
    }
    return spec;
}

MapSpec build_map(const CatalogEntry& entry, Rational alpha, const TanhSinhGrid& grid,
                  const PeriodicKernelConfig& cfg, double cap)
{
    BuildOptions opts;
    opts.analytic_hilbert = entry.analytic_hilbert;
    return build_map(GInverse(entry.h, cap), alpha, grid, cfg, std::move(opts));
}

// ---------------------------------------------------------------- evaluation

namespace {

MapValue assemble(const MapSpec& spec, double u, double v, double x, double y)
{
    const double a = spec.alpha.value();
    double m = u - a * kPi * y;
    MapValue out;
    const double lc = std::log(spec.g->cap());
    if (m > lc) {
        m = lc;
        out.saturated = true;
    }
    out.w = std::polar(std::exp(m), v + a * kPi * x);
    return out;
}

MapValue eval_with_column(const MapSpec& spec, const InteriorColumn& col, double x, double y)
{
    const double u = poisson_integral(col.layout, col.log_values, y);
    const double v = poisson_integral(col.layout, col.hilbert_values, y);
    return assemble(spec, u, v, x, y);
}

}  // namespace

std::pair<double, double> eval_harmonic_pair(const MapSpec& spec, ComplexPoint z)
{
    const double x = z.real(), y = z.imag();
    if (y < 0.0) throw std::domain_error("eval_map: Im z must be non-negative");
    if (y == 0.0) return {spec.log_g(x), spec.hilbert(x)};
    const auto col = spec.column(x);
    return {poisson_integral(col->layout, col->log_values, y),
            poisson_integral(col->layout, col->hilbert_values, y)};
}

MapValue eval_map(const MapSpec& spec, ComplexPoint z)
{
    const auto [u, v] = eval_harmonic_pair(spec, z);
    return assemble(spec, u, v, z.real(), z.imag());
}

// ---------------------------------------------------------------- boundary trace

int BoundaryTrace::component_count() const
{
    std::vector<int> labels = component_labels;
    std::sort(labels.begin(), labels.end());
    return static_cast<int>(std::unique(labels.begin(), labels.end()) - labels.begin());
}

std::vector<Segment> BoundaryTrace::segments() const
{
    std::vector<Segment> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const bool last_of_piece = i + 1 == points.size() || piece_labels[i + 1] != piece_labels[i];
        if (!last_of_piece) {
            out.push_back({points[i], points[i + 1]});
            continue;
        }
        const auto piece = static_cast<std::size_t>(piece_labels[i]);
        if (piece < piece_closed.size() && piece_closed[piece] && i > start)
            out.push_back({points[i], points[start]});
        start = i + 1;
    }
    return out;
}

Box BoundaryTrace::bounds() const
{
    Box b;
    for (const auto& p : points) b.expand(p);
    return b;
}

namespace {

struct Piece {
    double a = 0.0, b = 0.0;
    bool singular_a = false, singular_b = false;
    bool closed = false;
    int component = 0;
    std::vector<double> xs;
    std::vector<ComplexPoint> ws;
};

std::vector<ComplexPoint> boundary_values(const MapSpec& spec, const std::vector<double>& xs, int workers)
{
    spec.prefetch(xs, workers);
    std::vector<ComplexPoint> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_map(spec, {xs[i], 0.0}).w;
    return out;
}

}  // namespace

BoundaryTrace trace_boundary(const MapSpec& spec, int n_points, TraceOptions opts)
{
    if (n_points < 16) throw std::invalid_argument("trace_boundary: n_points must be at least 16");
    const double L = spec.joint_period();
    const bool singular = spec.g->singular();
    const auto& jumps = spec.g->jumps();

    // Jump positions of g~ on one torus period.
    std::vector<double> jump_pos;
    for (double s : jumps) {
        jump_pos.push_back(s);
        jump_pos.push_back(-s);
    }
    std::sort(jump_pos.begin(), jump_pos.end());

    std::vector<Piece> pieces;
    if (singular || jump_pos.empty()) {
        const double start = -1.0;
        struct Cut {
            double x;
            bool singular;
        };
        std::vector<Cut> cuts;
        const auto periods = static_cast<long>(std::llround(L / 2.0));
        for (long k = 0; k < periods; ++k) {
            const double base = start + 2.0 * static_cast<double>(k);
            if (singular || k == 0) cuts.push_back({base, singular});
            for (double j : jump_pos) cuts.push_back({base + 1.0 + j, false});
        }
        cuts.push_back({start + L, singular});
        if (!singular && jump_pos.empty()) {
            Piece p;
            p.a = start;
            p.b = start + L;
            p.closed = true;
            pieces.push_back(p);
        } else {
            int comp = 0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                if (i > 0 && cuts[i].singular) ++comp;
                Piece p;
                p.a = cuts[i].x;
                p.b = cuts[i + 1].x;
                p.singular_a = cuts[i].singular;
                p.singular_b = cuts[i + 1].singular;
                p.component = comp;
                pieces.push_back(p);
            }
        }
    } else {
        // Bounded g with jumps: the image closes up over the period, broken only at the jumps.
        std::vector<double> cuts;
        const double start = jump_pos.front();
        const auto periods = static_cast<long>(std::llround(L / 2.0));
        for (long k = 0; k < periods; ++k)
            for (double j : jump_pos) cuts.push_back(j + 2.0 * static_cast<double>(k));
        cuts.push_back(start + L);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            Piece p;
            p.a = cuts[i];
            p.b = cuts[i + 1];
            pieces.push_back(p);
        }
    }

    // Base samples at cell midpoints, so no sample sits on a singularity or a jump.
    std::vector<double> all_x;
    for (auto& p : pieces) {
        const double len = p.b - p.a;
        const int n = std::max(4, static_cast<int>(std::ceil(n_points * len / L)));
        const double h = len / n;
        for (int j = 0; j < n; ++j) p.xs.push_back(p.a + (j + 0.5) * h);
        all_x.insert(all_x.end(), p.xs.begin(), p.xs.end());
    }
    spec.prefetch(all_x, opts.workers);
    for (auto& p : pieces) p.ws = boundary_values(spec, p.xs, opts.workers);

    // Extend toward singular ends geometrically until the image is far out.
    for (auto& p : pieces) {
        const double gap = p.xs.front() - p.a;
        if (p.singular_a) {
            std::vector<double> ex;
            std::vector<ComplexPoint> ew;
            for (int k = 1; k <= 60; ++k) {
                const double x = p.a + gap * std::ldexp(1.0, -k);
                if (!(x > p.a)) break;
                const MapValue v = eval_map(spec, {x, 0.0});
                if (v.saturated) break;
                ex.push_back(x);
                ew.push_back(v.w);
                if (std::abs(v.w) >= opts.far_radius) break;
            }
            std::reverse(ex.begin(), ex.end());
            std::reverse(ew.begin(), ew.end());
            p.xs.insert(p.xs.begin(), ex.begin(), ex.end());
            p.ws.insert(p.ws.begin(), ew.begin(), ew.end());
        }
        if (p.singular_b) {
            for (int k = 1; k <= 60; ++k) {
                const double x = p.b - gap * std::ldexp(1.0, -k);
                if (!(x < p.b)) break;
                const MapValue v = eval_map(spec, {x, 0.0});
                if (v.saturated) break;
                p.xs.push_back(x);
                p.ws.push_back(v.w);
                if (std::abs(v.w) >= opts.far_radius) break;
            }
        }
    }

    // Chord-length refinement.
    Box box;
    std::size_t total = 0;
    for (const auto& p : pieces) {
        for (const auto& w : p.ws) box.expand(w);
        total += p.xs.size();
    }
    const double threshold = box.diagonal() / 256.0;
    const std::size_t budget = 16 * static_cast<std::size_t>(n_points);
    while (total < budget) {
        struct Insert {
            std::size_t piece, after;
            double x;
        };
        std::vector<Insert> todo;
        for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
            const auto& p = pieces[pi];
            for (std::size_t i = 0; i + 1 < p.xs.size(); ++i)
                if (std::abs(p.ws[i + 1] - p.ws[i]) > threshold)
                    todo.push_back({pi, i, 0.5 * (p.xs[i] + p.xs[i + 1])});
            if (p.closed && std::abs(p.ws.front() - p.ws.back()) > threshold)
                todo.push_back({pi, p.xs.size() - 1, 0.5 * (p.xs.back() + p.xs.front() + L)});
        }
        if (todo.empty()) break;
        if (total + todo.size() > budget) todo.resize(budget - total);
        std::vector<double> xs;
        for (const auto& t : todo) xs.push_back(t.x);
        const auto ws = boundary_values(spec, xs, opts.workers);
        // Insert back to front so earlier indices stay valid.
        for (std::size_t k = todo.size(); k-- > 0;) {
            auto& p = pieces[todo[k].piece];
            const auto at = static_cast<std::ptrdiff_t>(todo[k].after + 1);
            p.xs.insert(p.xs.begin() + at, todo[k].x);
            p.ws.insert(p.ws.begin() + at, ws[k]);
        }
        total += todo.size();
    }

    BoundaryTrace out;
    out.joint_period = L;
    bool any_finite = false;
    for (std::size_t pi = 0; pi < pieces.size(); ++pi) {
        const auto& p = pieces[pi];
        out.piece_closed.push_back(p.closed ? 1 : 0);
        for (std::size_t i = 0; i < p.xs.size(); ++i) {
            out.params.push_back(p.xs[i]);
            out.points.push_back(p.ws[i]);
            out.component_labels.push_back(p.component);
            out.piece_labels.push_back(static_cast<int>(pi));
            if (periodic_extension(*spec.g, p.xs[i]) < spec.g->cap()) any_finite = true;
        }
    }
    if (!any_finite) throw std::runtime_error("trace_boundary: every boundary point is saturated (degenerate g)");
    return out;
}

// ---------------------------------------------------------------- interior

InteriorLine trace_interior_line(const MapSpec& spec, double x0, double y_max, int n, int workers)
{
    constexpr double t_min = 1e-3;
    if (!(y_max > t_min)) throw std::invalid_argument("trace_interior_line: y_max must exceed 1e-3");
    if (n < 2) throw std::invalid_argument("trace_interior_line: n must be at least 2");
    const auto col = spec.column(x0, workers);
    InteriorLine line;
    line.x0 = x0;
    const double ratio = std::log(y_max / t_min);
    for (int i = 1; i <= n; ++i) {
        const double t = i == n ? y_max : t_min * std::exp(ratio * i / n);
        line.t.push_back(t);
        line.points.push_back(eval_with_column(spec, *col, x0, t).w);
    }
    return line;
}

CoveringReport covering_diagnostic(const MapSpec& spec, int resolution, int workers)
{
    if (resolution < 64) throw std::invalid_argument("covering_diagnostic: resolution must be at least 64");
    TraceOptions topts;
    topts.workers = workers;
    const BoundaryTrace trace = trace_boundary(spec, 32 * resolution, topts);
    const SegmentTree tree(trace.segments());

    const double L = spec.joint_period();
    const double y_max = std::max(2.0, 8.0 / (spec.alpha.value() * kPi));
    CoveringReport report;
    report.lines = resolution;
    report.points_per_line = resolution;
    report.boundary_points = trace.points.size();
    for (int j = 0; j < resolution; ++j) {
        const double x0 = -1.0 + L * (j + 0.5) / resolution;
        const InteriorLine line = trace_interior_line(spec, x0, y_max, resolution, workers);
        for (std::size_t i = 0; i + 1 < line.points.size(); ++i) {
            const Segment s{line.points[i], line.points[i + 1]};
            for (std::size_t idx : tree.crossings(s)) {
                Crossing c;
                c.x0 = x0;
                c.t = line.t[i];
                c.boundary_segment = idx;
                segments_cross(tree.segments()[idx], s, &c.point);
                report.crossings.push_back(c);
            }
        }
    }
    report.is_candidate_cover = report.crossings.empty();
    return report;
}

}  // namespace hinv
