#include "hinv/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hinv/parallel.hpp"

namespace hinv {

namespace {

constexpr double kPi = std::numbers::pi;

std::mt19937_64 worker_engine(std::uint64_t seed, int worker)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker)};
    return std::mt19937_64(seq);
}

// Uniform on the open interval (0, 1), independent of the standard library's distributions.
double uniform01(std::mt19937_64& eng)
{
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1p-53;
}

// Winding number of the closed polyline pieces around p.
int winding_number(const BoundaryTrace& trace, ComplexPoint p)
{
    double total = 0.0;
    for (const auto& s : trace.segments()) total += std::arg((s.b - p) / (s.a - p));
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

}  // namespace

std::string to_string(ExitMethod m) { return m == ExitMethod::projected ? "projected" : "domain_walk"; }

void ExitSamples::finalize()
{
    sorted = radii;
    std::sort(sorted.begin(), sorted.end());
}

std::vector<double> sample_cauchy_exits(double x0, double y0, std::size_t n, const RngSpec& rng)
{
    if (!(y0 > 0.0)) throw std::invalid_argument("Cauchy exits: y0 must be positive");
    std::vector<double> xi(n);
    parallel_chunks(n, rng.workers, [&](std::size_t b, std::size_t e, int w) {
        auto eng = worker_engine(rng.seed, w);
        for (std::size_t i = b; i < e; ++i) xi[i] = x0 + y0 * std::tan(kPi * (uniform01(eng) - 0.5));
    });
    return xi;
}

ExitSamples sample_projected_exits(const MapSpec& spec, double x0, double y0, std::size_t n, const RngSpec& rng)
{
    if (n < 1) throw std::invalid_argument("projected exits: n must be at least 1");
    ExitSamples out;
    out.method = ExitMethod::projected;
    out.seed = rng.seed;
    out.requested = n;
    const auto xi = sample_cauchy_exits(x0, y0, n, rng);
    out.radii.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.radii[i] = periodic_extension(*spec.g, xi[i]);
    out.finalize();
    return out;
}

ExitSamples sample_domain_exits(const BoundaryTrace& trace, ComplexPoint start, std::size_t n, const RngSpec& rng,
                                WalkOptions opts)
{
    if (n < 1) throw std::invalid_argument("domain exits: n must be at least 1");
    const SegmentTree tree(trace.segments());

    const bool all_closed = !trace.piece_closed.empty() &&
                            std::all_of(trace.piece_closed.begin(), trace.piece_closed.end(), [](char c) { return c; });
    const bool implicit_cap = !(opts.r_cap > 0.0);
    Box box;
    double extent = 0.0;
    for (const auto& p : trace.points) extent = std::max(extent, std::abs(p));
    const double r_cap = implicit_cap ? 10.0 * extent : opts.r_cap;
    for (const auto& p : trace.points) {
        if (std::abs(p) <= r_cap) box.expand(p);
    }
    const double delta = opts.delta > 0.0 ? opts.delta : 1e-4 * box.diagonal();
    if (!(delta > 0.0)) throw std::invalid_argument("domain exits: degenerate trace");

    const double d0 = tree.nearest(start).distance;
    if (!(d0 > delta)) throw std::invalid_argument("domain exits: start point lies on or too close to the boundary");
    if (all_closed && winding_number(trace, start) == 0)
        throw std::invalid_argument("domain exits: start point is outside the traced domain");

    struct Outcome {
        double radius = 0.0;
        ComplexPoint exit;
        char from_outside = 0;
        char status = 0;  // 0 absorbed, 1 escaped past r_cap, 2 budget exhausted
    };
    std::vector<Outcome> res(n);
    parallel_chunks(n, rng.workers, [&](std::size_t b, std::size_t e, int w) {
        auto eng = worker_engine(rng.seed, w);
        for (std::size_t i = b; i < e; ++i) {
            // One draw per walker seeds its path, so runs differing only in delta stay coupled.
            std::mt19937_64 path(eng());
            ComplexPoint z = start;
            Outcome o;
            o.status = 2;
            for (std::size_t step = 0; step < opts.step_budget; ++step) {
                const auto near = tree.nearest(z);
                if (near.distance < delta) {
                    o.status = 0;
                    o.exit = near.point;
                    o.radius = std::abs(near.point);
                    o.from_outside = std::abs(z) > o.radius ? 1 : 0;
                    break;
                }
                if (std::abs(z) > r_cap) {
                    o.status = 1;
                    break;
                }
                z += std::polar(near.distance, 2.0 * kPi * uniform01(path));
            }
            res[i] = o;
        }
    });

    ExitSamples out;
    out.method = ExitMethod::domain_walk;
    out.seed = rng.seed;
    out.requested = n;
    std::size_t truncated = 0;
    for (const auto& o : res) {
        if (o.status == 0) {
            out.radii.push_back(o.radius);
            out.exits.push_back(o.exit);
            out.from_outside.push_back(o.from_outside);
        } else {
            ++truncated;
            if (o.status == 2) ++out.budget_exhausted;
        }
    }
    out.truncated_mass = static_cast<double>(truncated) / static_cast<double>(n);
    if (out.budget_exhausted > 0)
        out.warnings.push_back(std::to_string(out.budget_exhausted) + " walkers exhausted the step budget");
    if (implicit_cap && out.truncated_mass > 0.5)
        throw std::invalid_argument("domain exits: most walkers escaped; start point appears to be outside the domain");
    if (out.radii.empty()) throw std::runtime_error("domain exits: no walker was absorbed");
    out.finalize();
    return out;
}

double empirical_h(const ExitSamples& samples, double r)
{
    if (samples.sorted.empty()) throw std::invalid_argument("empirical_h: no samples");
    const auto k = std::upper_bound(samples.sorted.begin(), samples.sorted.end(), r) - samples.sorted.begin();
    return static_cast<double>(k) / static_cast<double>(samples.sorted.size());
}

namespace {

// Visits each distinct sample value r with F(r-) and F(r).
template <class Fn>
void for_each_step(const std::vector<double>& sorted, Fn&& fn)
{
    const double n = static_cast<double>(sorted.size());
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        fn(sorted[i], static_cast<double>(i) / n, static_cast<double>(j) / n);
        i = j;
    }
}

}  // namespace

double ks_distance(const ExitSamples& samples, const HFunction& h)
{
    if (samples.sorted.empty()) throw std::invalid_argument("ks_distance: no samples");
    double d = 0.0;
    for_each_step(samples.sorted, [&](double r, double below, double upto) {
        d = std::max({d, std::fabs(upto - h(r)), std::fabs(below - h.left_limit(r))});
    });
    return d;
}

double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf)
{
    if (sorted.empty()) throw std::invalid_argument("ks_distance: no samples");
    double d = 0.0;
    for_each_step(sorted, [&](double r, double below, double upto) {
        const double c = cdf(r);
        d = std::max({d, std::fabs(upto - c), std::fabs(below - c)});
    });
    return d;
}

double ks_distance_shell(const ExitSamples& samples, const HFunction& h, double shell, double r_cap)
{
    if (samples.sorted.empty()) throw std::invalid_argument("ks_distance: no samples");
    const double norm = r_cap > 0.0 ? h(r_cap) : 1.0;
    if (!(norm > 0.0)) throw std::invalid_argument("ks_distance_shell: h(r_cap) is zero");
    double d = 0.0;
    for_each_step(samples.sorted, [&](double r, double below, double upto) {
        const double hi = std::min(1.0, h(r + shell) / norm);
        const double lo = std::min(1.0, h.left_limit(r - shell) / norm);
        d = std::max({d, upto - hi, lo - below});
    });
    return d;
}

double ks_distance_truncated(const ExitSamples& samples, const HFunction& h, double r_cap)
{
    if (samples.sorted.empty()) throw std::invalid_argument("ks_distance: no samples");
    const double norm = h(r_cap);
    if (!(norm > 0.0)) throw std::invalid_argument("ks_distance_truncated: h(r_cap) is zero");
    double d = 0.0;
    for_each_step(samples.sorted, [&](double r, double below, double upto) {
        const double hr = std::min(1.0, h(r) / norm);
        const double hl = std::min(1.0, h.left_limit(r) / norm);
        d = std::max({d, std::fabs(upto - hr), std::fabs(below - hl)});
    });
    return d;
}

std::string samples_to_csv(const ExitSamples& samples)
{
    std::string out = "radius\n";
    char buf[40];
    for (double r : samples.radii) {
        std::snprintf(buf, sizeof buf, "%.17g\n", r);
        out += buf;
    }
    return out;
}

}  // namespace hinv
