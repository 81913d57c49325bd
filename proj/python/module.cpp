#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hinv/catalog.hpp"
#include "hinv/hfunction.hpp"
#include "hinv/map.hpp"
#include "hinv/periodic.hpp"
#include "hinv/tanh_sinh.hpp"
#include "hinv/verify.hpp"

namespace py = pybind11;
using namespace hinv;

namespace {

template <class T>
py::array_t<T> to_array(const std::vector<T>& v)
{
    return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

PeriodicKernelConfig kernel_config(double epsilon)
{
    PeriodicKernelConfig cfg;
    cfg.epsilon = epsilon;
    cfg.validate();
    return cfg;
}

ExitSamples samples_from(const std::vector<double>& radii)
{
    ExitSamples s;
    s.radii = radii;
    s.finalize();
    return s;
}

}  // namespace

PYBIND11_MODULE(_hinv, m)
{
    m.doc() = "Conformal maps whose boundary exit radius has a prescribed distribution.";

    py::class_<HFunction>(m, "HFunction")
        .def_static("step", &HFunction::step, py::arg("breakpoints"), py::arg("values"))
        .def_static("tabulated", &HFunction::tabulated, py::arg("radii"), py::arg("values"))
        .def_static("from_csv", &parse_h_table_csv, py::arg("text"))
        .def_static("from_step_json", &parse_step_json, py::arg("text"))
        .def("__call__", &HFunction::operator(), py::arg("r"))
        .def("left_limit", &HFunction::left_limit, py::arg("r"))
        .def("inverse", &HFunction::inverse, py::arg("s"))
        .def_property_readonly("d_min", &HFunction::d_min)
        .def_property_readonly("g_jumps", &HFunction::g_jumps)
        .def("__repr__", &HFunction::describe);

    py::class_<GInverse>(m, "GInverse")
        .def(py::init<HFunction, double>(), py::arg("h"), py::arg("cap") = kDefaultCap)
        .def("__call__", &GInverse::operator(), py::arg("s"))
        .def_property_readonly("cap", &GInverse::cap)
        .def_property_readonly("singular", &GInverse::singular)
        .def_property_readonly("jumps", &GInverse::jumps);

    m.def("ginv", &ginv, py::arg("h"), py::arg("s"), py::arg("cap") = kDefaultCap);
    m.def("fold", &fold, py::arg("x"));
    m.def("wrap", &wrap, py::arg("x"));
    m.def("periodic_extension", &periodic_extension, py::arg("g"), py::arg("x"));
    m.def("log_g", &log_g, py::arg("g"), py::arg("x"));

    py::class_<LpEstimate>(m, "LpEstimate")
        .def_readonly("p", &LpEstimate::p)
        .def_readonly("norm", &LpEstimate::norm)
        .def_readonly("divergent", &LpEstimate::divergent);
    m.def("lp_norm_estimate", &lp_norm_estimate, py::arg("g"), py::arg("p"), py::arg("grid"));

    py::class_<MomentResult>(m, "MomentResult")
        .def_readonly("value", &MomentResult::value)
        .def_readonly("divergent", &MomentResult::divergent)
        .def_readonly("decade_integrals", &MomentResult::decade_integrals);
    m.def("moment_from_h", &moment_from_h, py::arg("h"), py::arg("p"), py::arg("r_max"));

    py::class_<TanhSinhGrid>(m, "TanhSinhGrid")
        .def(py::init<int>(), py::arg("M") = 1000)
        .def_property_readonly("M", &TanhSinhGrid::m)
        .def_property_readonly("step", &TanhSinhGrid::step)
        .def_property_readonly("nodes", [](const TanhSinhGrid& g) {
            return to_array(std::vector<double>(g.nodes().begin(), g.nodes().end()));
        })
        .def_property_readonly("weights", [](const TanhSinhGrid& g) {
            return to_array(std::vector<double>(g.weights().begin(), g.weights().end()));
        })
        .def("__len__", &TanhSinhGrid::size)
        .def("quad", [](const TanhSinhGrid& g, const std::function<double(double)>& f) { return quad(g, f); },
             py::arg("f"));

    m.def("periodic_poisson_kernel", &periodic_poisson_kernel, py::arg("y"), py::arg("theta"));
    m.def(
        "poisson_integral",
        [](const PeriodicFn& f, double x, double y, const TanhSinhGrid& grid, const std::vector<double>& breaks) {
            return poisson_integral(f, x, y, grid, breaks);
        },
        py::arg("f"), py::arg("x"), py::arg("y"), py::arg("grid"), py::arg("breaks") = std::vector<double>{});
    m.def(
        "hilbert_transform",
        [](const PeriodicFn& f, double x, const TanhSinhGrid& grid, const std::vector<double>& breaks, double epsilon) {
            return hilbert_transform(f, x, grid, kernel_config(epsilon), breaks);
        },
        py::arg("f"), py::arg("x"), py::arg("grid"), py::arg("breaks") = std::vector<double>{},
        py::arg("epsilon") = 1e-12);
    m.def("hilbert_of_periodic_indicator", &hilbert_of_periodic_indicator, py::arg("a"), py::arg("b"), py::arg("x"));

    py::class_<CatalogEntry>(m, "CatalogEntry")
        .def_readonly("id", &CatalogEntry::id)
        .def_readonly("h", &CatalogEntry::h)
        .def_readonly("params", &CatalogEntry::params)
        .def_readonly("notes", &CatalogEntry::notes)
        .def("g", [](const CatalogEntry& e, double s) { return e.g(s); }, py::arg("s"))
        .def_property_readonly("has_analytic_hilbert",
                               [](const CatalogEntry& e) { return static_cast<bool>(e.analytic_hilbert); })
        .def(
            "analytic_hilbert",
            [](const CatalogEntry& e, double x) {
                if (!e.analytic_hilbert) throw py::value_error(e.id + " has no closed-form Hilbert transform");
                return e.analytic_hilbert(x);
            },
            py::arg("x"));
    m.def("catalog_get", &catalog_get, py::arg("id"), py::arg("params") = ParamMap{});
    m.def("catalog_ids", &catalog_ids);
    m.def("catalog_defaults", &catalog_defaults, py::arg("id"));

    py::class_<Rational>(m, "Rational")
        .def(py::init<long, long>(), py::arg("p"), py::arg("q"))
        .def_readonly("p", &Rational::p)
        .def_readonly("q", &Rational::q)
        .def("__float__", &Rational::value)
        .def("__str__", &Rational::str);
    m.def("parse_alpha", [](const std::string& text) { return parse_alpha(text); }, py::arg("text"));

    py::class_<MapSpec>(m, "MapSpec")
        .def_readonly("alpha", &MapSpec::alpha)
        .def_readonly("warnings", &MapSpec::warnings)
        .def_property_readonly("joint_period", &MapSpec::joint_period)
        .def_property_readonly("numeric_hilbert", &MapSpec::numeric_hilbert)
        .def("hilbert", &MapSpec::hilbert, py::arg("x"))
        .def("log_g", &MapSpec::log_g, py::arg("x"));

    m.def(
        "build_map",
        [](const CatalogEntry& entry, const std::string& alpha, const TanhSinhGrid& grid, double epsilon, bool numeric,
           double cap) {
            const Rational a = parse_alpha(alpha);
            py::gil_scoped_release release;
            if (numeric) return build_map(GInverse(entry.h, cap), a, grid, kernel_config(epsilon));
            return build_map(entry, a, grid, kernel_config(epsilon), cap);
        },
        py::arg("entry"), py::arg("alpha") = "1", py::arg("grid") = TanhSinhGrid(1000), py::arg("epsilon") = 1e-12,
        py::arg("numeric") = false, py::arg("cap") = kDefaultCap);
    m.def(
        "build_map",
        [](const HFunction& h, const std::string& alpha, const TanhSinhGrid& grid, double epsilon, double cap) {
            const Rational a = parse_alpha(alpha);
            py::gil_scoped_release release;
            BuildOptions opts;
            if (std::holds_alternative<StepH>(h.kind())) opts.analytic_hilbert = step_hilbert(h, cap);
            return build_map(GInverse(h, cap), a, grid, kernel_config(epsilon), opts);
        },
        py::arg("h"), py::arg("alpha") = "1", py::arg("grid") = TanhSinhGrid(1000), py::arg("epsilon") = 1e-12,
        py::arg("cap") = kDefaultCap);

    m.def("eval_map", [](const MapSpec& spec, std::complex<double> z) { return eval_map(spec, z).w; },
          py::arg("spec"), py::arg("z"));
    m.def("eval_harmonic_pair", &eval_harmonic_pair, py::arg("spec"), py::arg("z"));

    py::class_<BoundaryTrace>(m, "BoundaryTrace")
        .def_property_readonly("points", [](const BoundaryTrace& t) { return to_array(t.points); })
        .def_property_readonly("params", [](const BoundaryTrace& t) { return to_array(t.params); })
        .def_readonly("component_labels", &BoundaryTrace::component_labels)
        .def_readonly("piece_labels", &BoundaryTrace::piece_labels)
        .def_readonly("joint_period", &BoundaryTrace::joint_period)
        .def_property_readonly("component_count", &BoundaryTrace::component_count)
        .def("to_csv", [](const BoundaryTrace& t) { return trace_to_csv(t); })
        .def_static("from_csv", &trace_from_csv, py::arg("text"))
        .def("__len__", [](const BoundaryTrace& t) { return t.points.size(); });
    m.def(
        "trace_boundary",
        [](const MapSpec& spec, int n_points, double far_radius, int workers) {
            TraceOptions opts;
            opts.far_radius = far_radius;
            opts.workers = workers;
            py::gil_scoped_release release;
            return trace_boundary(spec, n_points, opts);
        },
        py::arg("spec"), py::arg("n_points") = 4096, py::arg("far_radius") = 1e4, py::arg("workers") = 1);

    py::class_<InteriorLine>(m, "InteriorLine")
        .def_readonly("x0", &InteriorLine::x0)
        .def_property_readonly("t", [](const InteriorLine& l) { return to_array(l.t); })
        .def_property_readonly("points", [](const InteriorLine& l) { return to_array(l.points); });
    m.def("trace_interior_line", &trace_interior_line, py::arg("spec"), py::arg("x0"), py::arg("y_max"),
          py::arg("n"), py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("trace_to_svg", &trace_to_svg, py::arg("trace"), py::arg("lines") = std::vector<InteriorLine>{},
          py::arg("view_radius") = 0.0);

    py::class_<Crossing>(m, "Crossing")
        .def_readonly("x0", &Crossing::x0)
        .def_readonly("t", &Crossing::t)
        .def_readonly("boundary_segment", &Crossing::boundary_segment)
        .def_readonly("point", &Crossing::point);
    py::class_<CoveringReport>(m, "CoveringReport")
        .def_readonly("is_candidate_cover", &CoveringReport::is_candidate_cover)
        .def_readonly("crossings", &CoveringReport::crossings)
        .def_readonly("lines", &CoveringReport::lines)
        .def_readonly("points_per_line", &CoveringReport::points_per_line);
    m.def("covering_diagnostic", &covering_diagnostic, py::arg("spec"), py::arg("resolution") = 64,
          py::arg("workers") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<ExitSamples>(m, "ExitSamples")
        .def_property_readonly("radii", [](const ExitSamples& s) { return to_array(s.radii); })
        .def_property_readonly("exits", [](const ExitSamples& s) { return to_array(s.exits); })
        .def_readonly("seed", &ExitSamples::seed)
        .def_property_readonly("method", [](const ExitSamples& s) { return to_string(s.method); })
        .def_readonly("truncated_mass", &ExitSamples::truncated_mass)
        .def_readonly("budget_exhausted", &ExitSamples::budget_exhausted)
        .def_readonly("warnings", &ExitSamples::warnings)
        .def("empirical_h", &empirical_h, py::arg("r"))
        .def("ks_distance", py::overload_cast<const ExitSamples&, const HFunction&>(&ks_distance), py::arg("h"))
        .def("__len__", [](const ExitSamples& s) { return s.radii.size(); });

    m.def(
        "sample_cauchy_exits",
        [](double x0, double y0, std::size_t n, std::uint64_t seed, int workers) {
            std::vector<double> xi;
            {
                py::gil_scoped_release release;
                xi = sample_cauchy_exits(x0, y0, n, RngSpec{seed, workers});
            }
            return to_array(xi);
        },
        py::arg("x0"), py::arg("y0"), py::arg("n"), py::arg("seed") = 0, py::arg("workers") = 1);
    m.def(
        "sample_projected_exits",
        [](const MapSpec& spec, double x0, double y0, std::size_t n, std::uint64_t seed, int workers) {
            return sample_projected_exits(spec, x0, y0, n, RngSpec{seed, workers});
        },
        py::arg("spec"), py::arg("x0"), py::arg("y0"), py::arg("n"), py::arg("seed") = 0, py::arg("workers") = 1,
        py::call_guard<py::gil_scoped_release>());
    m.def(
        "sample_domain_exits",
        [](const BoundaryTrace& trace, std::complex<double> start, std::size_t n, std::uint64_t seed, int workers,
           double delta, double r_cap, std::size_t step_budget) {
            WalkOptions opts;
            opts.delta = delta;
            opts.r_cap = r_cap;
            opts.step_budget = step_budget;
            return sample_domain_exits(trace, start, n, RngSpec{seed, workers}, opts);
        },
        py::arg("trace"), py::arg("start"), py::arg("n"), py::arg("seed") = 0, py::arg("workers") = 1,
        py::arg("delta") = 0.0, py::arg("r_cap") = 0.0, py::arg("step_budget") = 100000,
        py::call_guard<py::gil_scoped_release>());

    m.def("empirical_h", [](const std::vector<double>& radii, double r) { return empirical_h(samples_from(radii), r); },
          py::arg("radii"), py::arg("r"));
    m.def(
        "ks_distance",
        [](const std::vector<double>& radii, const HFunction& h) { return ks_distance(samples_from(radii), h); },
        py::arg("radii"), py::arg("h"));
    m.def(
        "ks_distance_truncated",
        [](const ExitSamples& s, const HFunction& h, double r_cap) { return ks_distance_truncated(s, h, r_cap); },
        py::arg("samples"), py::arg("h"), py::arg("r_cap"));
}
