#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hinv/hfunction.hpp"
#include "hinv/map.hpp"

namespace hinv {

/// Random streams: worker i draws from a generator seeded by (seed, i), and
/// sample indices are assigned to workers in contiguous chunks.
struct RngSpec {
    std::uint64_t seed = 0;
    int workers = 1;
};

enum class ExitMethod { projected, domain_walk };

std::string to_string(ExitMethod m);

struct ExitSamples {
    std::vector<double> radii;        // absorbed walkers only
    std::vector<double> sorted;       // ascending copy of radii
    std::vector<ComplexPoint> exits;  // domain walk: absorption points on the polyline
    std::vector<char> from_outside;   // domain walk: walker was farther from 0 than its exit point
    std::uint64_t seed = 0;
    ExitMethod method = ExitMethod::projected;
    std::size_t requested = 0;
    double truncated_mass = 0.0;
    std::size_t budget_exhausted = 0;
    std::vector<std::string> warnings;

    void finalize();
};

/// Exact exit positions of planar Brownian motion from the upper half-plane
/// started at x0 + i y0: x0 + y0 C with C standard Cauchy.
std::vector<double> sample_cauchy_exits(double x0, double y0, std::size_t n, const RngSpec& rng);

/// Radii |f(xi)| = g~(xi) for Cauchy exit positions xi.
ExitSamples sample_projected_exits(const MapSpec& spec, double x0, double y0, std::size_t n, const RngSpec& rng);

struct WalkOptions {
    double delta = 0.0;         // absorption distance; <= 0 means 1e-4 of the bounding-box diagonal
    double r_cap = 0.0;         // truncation radius; <= 0 means 10x the trace extent
    std::size_t step_budget = 100000;
};

/// Walk-on-spheres from `start` against the traced boundary polyline. Radii are
/// measured from the origin at the nearest polyline point.
ExitSamples sample_domain_exits(const BoundaryTrace& trace, ComplexPoint start, std::size_t n, const RngSpec& rng,
                                WalkOptions opts = {});

/// Fraction of radii <= r.
double empirical_h(const ExitSamples& samples, double r);

/// sup |F_n - h| over sample radii, using both h(r) and h(r-).
double ks_distance(const ExitSamples& samples, const HFunction& h);

/// KS distance of sorted data against a continuous CDF.
double ks_distance(const std::vector<double>& sorted, const std::function<double(double)>& cdf);

/// KS distance that tolerates radii displaced by up to `shell`:
/// sup max(F_n(r) - h(r + shell), h((r - shell)-) - F_n(r-), 0).
/// With r_cap > 0 the target is renormalized to h(r) / h(r_cap).
double ks_distance_shell(const ExitSamples& samples, const HFunction& h, double shell, double r_cap = 0.0);

/// KS distance of the absorbed radii against h(r) / h(r_cap) on [0, r_cap].
double ks_distance_truncated(const ExitSamples& samples, const HFunction& h, double r_cap);

/// One-column CSV "radius" with 17 significant digits.
std::string samples_to_csv(const ExitSamples& samples);

}  // namespace hinv
