#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hinv/hfunction.hpp"

namespace hinv {

/// A built-in h-function with its closed-form inverse and, where known, the
/// closed form of H ln g~ on the real line.
struct CatalogEntry {
    std::string id;
    HFunction h;
    std::function<double(double)> g;                 // on [0, 1]; +inf at s = 1 for unbounded domains
    std::function<double(double)> analytic_hilbert;  // empty when only numeric evaluation is possible
    ParamMap params;
    std::string notes;
};

/// Entries: disk, half-plane, omega-n (n), two-step, custom (a, n).
/// Missing parameters take their defaults; unknown ids or parameters throw.
CatalogEntry catalog_get(const std::string& id, const ParamMap& params = {});

std::vector<std::string> catalog_ids();

/// Default parameters for an entry, e.g. {"n": 2} for omega-n.
ParamMap catalog_defaults(const std::string& id);

/// Periodized Hilbert transform of the indicator of [a, b) + 2Z:
/// (1/pi) ln |sin(pi (x - a) / 2) / sin(pi (x - b) / 2)|.
double hilbert_of_periodic_indicator(double a, double b, double x);

}  // namespace hinv
