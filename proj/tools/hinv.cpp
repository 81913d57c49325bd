// hinv: build holomorphic maps with prescribed harmonic-measure distribution
// functions, trace them and verify them by Monte Carlo.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hinv/catalog.hpp"
#include "hinv/hfunction.hpp"
#include "hinv/map.hpp"
#include "hinv/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace hinv;

namespace {

constexpr int kSchema = 1;

struct RunConfig {
    std::string catalog;
    std::vector<std::string> params;
    std::string h_table;
    std::string step;
    std::string alpha = "1";
    int m = 1000;
    double epsilon = 1e-12;
    double cap = kDefaultCap;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::size_t n = 100000;
    int workers = 4;
    bool svg = false;
};

struct Source {
    std::string label;
    HFunction h;
    PeriodicFn analytic_hilbert;
};

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ParamMap parse_params(const std::vector<std::string>& kv)
{
    ParamMap out;
    for (const auto& item : kv) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument("--params expects key=value, got '" + item + "'");
        std::size_t used = 0;
        const std::string value = item.substr(eq + 1);
        double v = 0.0;
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != value.size()) throw std::invalid_argument("--params: bad number in '" + item + "'");
        out[item.substr(0, eq)] = v;
    }
    return out;
}

Source load_source(const RunConfig& cfg)
{
    const int given = !cfg.catalog.empty() + !cfg.h_table.empty() + !cfg.step.empty();
    if (given != 1) throw std::invalid_argument("give exactly one of --catalog, --h-table, --step");
    if (!cfg.catalog.empty()) {
        auto entry = catalog_get(cfg.catalog, parse_params(cfg.params));
        std::string label = entry.id;
        for (const auto& [k, v] : entry.params) label += " " + k + "=" + fmt17(v);
        return {label, entry.h, entry.analytic_hilbert};
    }
    if (!cfg.params.empty()) throw std::invalid_argument("--params only applies to --catalog");
    if (!cfg.h_table.empty()) return {"table " + cfg.h_table, read_h_table_csv(cfg.h_table), nullptr};
    HFunction h = read_step_json(cfg.step);
    return {"step " + cfg.step, h, step_hilbert(h, cfg.cap)};
}

void validate(const RunConfig& cfg)
{
    if (cfg.m < 64 || cfg.m > 1000000) throw std::invalid_argument("--M must lie in [64, 1e6]");
    if (!(cfg.epsilon > 0.0)) throw std::invalid_argument("--epsilon must be positive");
    if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
    if (cfg.workers < 1) throw std::invalid_argument("--workers must be at least 1");
    if (!(cfg.cap > 1.0)) throw std::invalid_argument("--cap must exceed 1");
}

Rational alpha_of(const RunConfig& cfg, std::vector<std::string>& warnings)
{
    bool snapped = false;
    const Rational a = parse_alpha(cfg.alpha, &snapped);
    if (snapped) warnings.push_back("alpha " + cfg.alpha + " snapped to " + a.str());
    return a;
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("error writing " + path.string());
}

fs::path out_path(const RunConfig& cfg, const std::string& name)
{
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

void report_warnings(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

MapSpec make_spec(const RunConfig& cfg, const Source& src, Rational alpha)
{
    PeriodicKernelConfig kcfg;
    kcfg.epsilon = cfg.epsilon;
    BuildOptions opts;
    opts.analytic_hilbert = src.analytic_hilbert;
    return build_map(GInverse(src.h, cfg.cap), alpha, TanhSinhGrid(cfg.m), kcfg, std::move(opts));
}

// ---------------------------------------------------------------- commands

void cmd_invert(const RunConfig& cfg, int grid)
{
    if (grid < 2) throw std::invalid_argument("--grid must be at least 2");
    const Source src = load_source(cfg);
    const GInverse g(src.h, cfg.cap);
    std::string csv = "s,g\n";
    for (int i = 0; i < grid; ++i) {
        const double s = static_cast<double>(i) / (grid - 1);
        csv += fmt17(s) + "," + fmt17(g(s)) + "\n";
    }
    write_file(out_path(cfg, "g.csv"), csv);

    const TanhSinhGrid quad_grid(cfg.m);
    json lp = json::array();
    for (double p : {1.1, 1.5, 2.0}) {
        const LpEstimate e = lp_norm_estimate(g, p, quad_grid);
        lp.push_back({{"p", p}, {"norm", e.norm}, {"divergent", e.divergent}});
    }
    json report{{"schema", kSchema},   {"command", "invert"},     {"source", src.label}, {"grid", grid},
                {"d_min", g.source().d_min()}, {"singular", g.singular()}, {"cap", g.cap()},  {"lp_norm", lp}};
    write_file(out_path(cfg, "invert.json"), report.dump(2) + "\n");
}

void cmd_map(const RunConfig& cfg, int n_points, int resolution, const std::vector<double>& x0s,
             std::optional<double> y_max_opt)
{
    const Source src = load_source(cfg);
    std::vector<std::string> warnings;
    const Rational alpha = alpha_of(cfg, warnings);
    const MapSpec spec = make_spec(cfg, src, alpha);
    warnings.insert(warnings.end(), spec.warnings.begin(), spec.warnings.end());

    TraceOptions topts;
    topts.workers = cfg.workers;
    const BoundaryTrace trace = trace_boundary(spec, n_points, topts);
    write_file(out_path(cfg, "trace.csv"), trace_to_csv(trace));

    const double y_max = y_max_opt.value_or(std::max(2.0, 8.0 / (alpha.value() * std::numbers::pi)));
    std::vector<InteriorLine> lines;
    for (std::size_t j = 0; j < x0s.size(); ++j) {
        lines.push_back(trace_interior_line(spec, x0s[j], y_max, 256, cfg.workers));
        write_file(out_path(cfg, "line_" + std::to_string(j) + ".csv"), line_to_csv(lines.back()));
    }
    if (cfg.svg) write_file(out_path(cfg, "trace.svg"), trace_to_svg(trace, lines));

    const CoveringReport cover = covering_diagnostic(spec, resolution, cfg.workers);
    json crossings = json::array();
    for (std::size_t i = 0; i < cover.crossings.size() && i < 100; ++i) {
        const auto& c = cover.crossings[i];
        crossings.push_back({{"x0", c.x0}, {"t", c.t}, {"re", c.point.real()}, {"im", c.point.imag()}});
    }
    json report{{"schema", kSchema},
                {"command", "map"},
                {"source", src.label},
                {"alpha", alpha.str()},
                {"M", cfg.m},
                {"joint_period", trace.joint_period},
                {"boundary_points", trace.points.size()},
                {"components", trace.component_count()},
                // half lcm(2, 2/alpha); the 2 pi / alpha reading has no finite value for rational alpha
                {"components_formula_2_over_alpha", alpha.q},
                {"components_formula_2pi_over_alpha", nullptr},
                {"covering",
                 {{"is_candidate_cover", cover.is_candidate_cover},
                  {"crossing_count", cover.crossings.size()},
                  {"lines", cover.lines},
                  {"points_per_line", cover.points_per_line},
                  {"crossings", crossings}}},
                {"warnings", warnings}};
    write_file(out_path(cfg, "covering.json"), report.dump(2) + "\n");
    report_warnings(warnings);
}

void cmd_verify(const RunConfig& cfg, double x0, double y0, double start_re, double start_im,
                std::optional<double> r_cap_opt, double delta, int n_points, bool skip_domain)
{
    const Source src = load_source(cfg);
    std::vector<std::string> warnings;
    const Rational alpha = alpha_of(cfg, warnings);
    const MapSpec spec = make_spec(cfg, src, alpha);
    warnings.insert(warnings.end(), spec.warnings.begin(), spec.warnings.end());
    const RngSpec rng{cfg.seed, cfg.workers};

    const ExitSamples proj = sample_projected_exits(spec, x0, y0, cfg.n, rng);
    write_file(out_path(cfg, "projected.csv"), samples_to_csv(proj));
    const auto xi = sample_cauchy_exits(x0, y0, cfg.n, rng);
    std::vector<double> folded;
    for (double x : xi) folded.push_back(wrap(x));
    std::sort(folded.begin(), folded.end());
    const double uniform_ks = ks_distance(folded, [](double t) { return std::clamp(0.5 * (t + 1.0), 0.0, 1.0); });

    json report{{"schema", kSchema},
                {"command", "verify"},
                {"source", src.label},
                {"alpha", alpha.str()},
                {"n", cfg.n},
                {"seed", cfg.seed},
                {"workers", cfg.workers},
                {"projected",
                 {{"method", "projected"},
                  {"n", cfg.n},
                  {"seed", cfg.seed},
                  {"ks", ks_distance(proj, src.h)},
                  {"truncated_mass", proj.truncated_mass},
                  {"x0", x0},
                  {"y0", y0}}},
                {"ks_projected", ks_distance(proj, src.h)},
                {"uniformization_ks", uniform_ks}};

    if (!skip_domain) {
        const double r_cap = r_cap_opt.value_or(spec.g->singular() ? 1e3 : 0.0);
        TraceOptions topts;
        topts.workers = cfg.workers;
        topts.far_radius = std::max(1e4, 10.0 * r_cap);
        const BoundaryTrace trace = trace_boundary(spec, n_points, topts);
        WalkOptions wopts;
        wopts.delta = delta;
        wopts.r_cap = r_cap;
        const ExitSamples dom = sample_domain_exits(trace, {start_re, start_im}, cfg.n, rng, wopts);
        warnings.insert(warnings.end(), dom.warnings.begin(), dom.warnings.end());
        write_file(out_path(cfg, "domain.csv"), samples_to_csv(dom));

        Box box;
        for (const auto& p : trace.points)
            if (r_cap <= 0.0 || std::abs(p) <= r_cap) box.expand(p);
        const double shell = delta > 0.0 ? delta : 1e-4 * box.diagonal();
        std::size_t outside = 0;
        for (char c : dom.from_outside) outside += c ? 1 : 0;

        // Masses at the atoms of a purely atomic target.
        json atoms = json::array();
        std::vector<double> atom_radii;
        double atom_total = 0.0;
        for (double r : src.h.radius_breaks()) {
            const double jump = src.h(r) - src.h.left_limit(r);
            if (jump > 0.0) {
                atom_radii.push_back(r);
                atom_total += jump;
            }
        }
        if (!atom_radii.empty() && atom_total > 1.0 - 1e-12) {
            std::vector<std::size_t> counts(atom_radii.size(), 0);
            for (double r : dom.radii) {
                std::size_t best = 0;
                for (std::size_t k = 1; k < atom_radii.size(); ++k)
                    if (std::fabs(r - atom_radii[k]) < std::fabs(r - atom_radii[best])) best = k;
                ++counts[best];
            }
            for (std::size_t k = 0; k < atom_radii.size(); ++k)
                atoms.push_back({{"radius", atom_radii[k]},
                                 {"mass", static_cast<double>(counts[k]) / static_cast<double>(dom.radii.size())}});
        }

        const double ks_dom = ks_distance_shell(dom, src.h, shell, r_cap);
        report["domain"] = {{"method", "domain_walk"},
                            {"n", cfg.n},
                            {"seed", cfg.seed},
                            {"ks", ks_dom},
                            {"truncated_mass", dom.truncated_mass},
                            {"start", {start_re, start_im}},
                            {"boundary_points", trace.points.size()},
                            {"delta", shell},
                            {"r_cap", r_cap},
                            {"absorbed", dom.radii.size()},
                            {"budget_exhausted", dom.budget_exhausted},
                            {"exits_from_outside_fraction",
                             static_cast<double>(outside) / static_cast<double>(dom.radii.size())},
                            {"atom_masses", atoms},
                            {"ks_plain", r_cap > 0.0 ? ks_distance_truncated(dom, src.h, r_cap)
                                                     : ks_distance(dom, src.h)}};
        report["ks_domain"] = ks_dom;
        report["truncated_mass"] = dom.truncated_mass;
    }
    report["warnings"] = warnings;
    write_file(out_path(cfg, "verify.json"), report.dump(2) + "\n");
    report_warnings(warnings);
}

void cmd_moments(const RunConfig& cfg, const std::vector<double>& ps, double r_max)
{
    const Source src = load_source(cfg);
    std::string csv = "p,value,divergent\n";
    json rows = json::array();
    for (double p : ps) {
        const MomentResult m = moment_from_h(src.h, p, r_max);
        csv += fmt17(p) + "," + fmt17(m.value) + "," + (m.divergent ? "1" : "0") + "\n";
        rows.push_back({{"p", p}, {"value", m.value}, {"divergent", m.divergent}, {"decades", m.decade_integrals}});
    }
    write_file(out_path(cfg, "moments.csv"), csv);
    json report{{"schema", kSchema}, {"command", "moments"}, {"source", src.label}, {"r_max", r_max},
                {"moments", rows}};
    write_file(out_path(cfg, "moments.json"), report.dump(2) + "\n");
}

void cmd_catalog_list()
{
    json out = json::array();
    for (const auto& id : catalog_ids()) {
        const auto entry = catalog_get(id);
        out.push_back({{"id", id},
                       {"defaults", catalog_defaults(id)},
                       {"analytic_hilbert", static_cast<bool>(entry.analytic_hilbert)},
                       {"notes", entry.notes}});
    }
    std::cout << json{{"schema", kSchema}, {"catalog", out}}.dump(2) << "\n";
}

void add_common(CLI::App* cmd, RunConfig& cfg, bool with_alpha)
{
    cmd->add_option("--catalog", cfg.catalog, "catalog id (see catalog-list)");
    cmd->add_option("--params", cfg.params, "catalog parameters as key=value")->expected(1, -1);
    cmd->add_option("--h-table", cfg.h_table, "CSV file with header r,h");
    cmd->add_option("--step", cfg.step, "JSON step function {breakpoints, values}");
    cmd->add_option("--out-dir", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--M", cfg.m, "tanh-sinh terms per side")->capture_default_str();
    cmd->add_option("--cap", cfg.cap, "ceiling for infinite values of g")->capture_default_str();
    if (with_alpha) {
        cmd->add_option("--alpha", cfg.alpha, "alpha as p/q or decimal")->capture_default_str();
        cmd->add_option("--epsilon", cfg.epsilon, "principal-value exclusion radius")->capture_default_str();
        cmd->add_option("--workers", cfg.workers, "worker threads")->capture_default_str();
        cmd->add_flag("--svg", cfg.svg, "also write an SVG picture");
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hinv: holomorphic maps with prescribed harmonic-measure distribution functions"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* invert = app.add_subcommand("invert", "tabulate the generalized inverse g and its L^p estimate");
    add_common(invert, cfg, false);
    int grid = 1001;
    invert->add_option("--grid", grid, "number of s values on [0, 1]")->capture_default_str();

    auto* map = app.add_subcommand("map", "trace the boundary image, interior lines and covering diagnostic");
    add_common(map, cfg, true);
    int n_points = 4096, resolution = 64;
    std::vector<double> x0s;
    std::optional<double> y_max;
    map->add_option("--n-points", n_points, "boundary samples before refinement")->capture_default_str();
    map->add_option("--resolution", resolution, "covering diagnostic lattice size")->capture_default_str();
    map->add_option("--x0", x0s, "interior lines to export")->expected(1, -1);
    map->add_option("--y-max", y_max, "top of exported interior lines");

    auto* verify = app.add_subcommand("verify", "Monte Carlo verification of the exit-radius distribution");
    add_common(verify, cfg, true);
    double vx0 = 0.0, y0 = 20.0, start_re = 0.0, start_im = 0.0, delta = 0.0;
    std::optional<double> r_cap;
    int verify_points = 4096;
    bool skip_domain = false;
    verify->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    verify->add_option("--n", cfg.n, "samples per verifier")->capture_default_str();
    verify->add_option("--x0", vx0, "half-plane start, real part")->capture_default_str();
    verify->add_option("--y0", y0, "half-plane start, imaginary part")->capture_default_str();
    verify->add_option("--start-re", start_re, "domain walk start, real part")->capture_default_str();
    verify->add_option("--start-im", start_im, "domain walk start, imaginary part")->capture_default_str();
    verify->add_option("--r-cap", r_cap, "truncation radius for the domain walk");
    verify->add_option("--delta", delta, "absorption distance (default 1e-4 of the trace diagonal)");
    verify->add_option("--n-points", verify_points, "boundary samples for the traced domain")->capture_default_str();
    verify->add_flag("--skip-domain", skip_domain, "only run the projected verifier");

    auto* moments = app.add_subcommand("moments", "layer-cake moments of the exit radius");
    add_common(moments, cfg, false);
    std::vector<double> ps{0.5, 1.0, 2.0};
    double r_max = 1e6;
    moments->add_option("--p", ps, "moment orders")->expected(1, -1)->capture_default_str();
    moments->add_option("--r-max", r_max, "upper integration radius")->capture_default_str();

    auto* list = app.add_subcommand("catalog-list", "list the built-in h-functions");

    CLI11_PARSE(app, argc, argv);

    try {
        validate(cfg);
        if (*invert) cmd_invert(cfg, grid);
        if (*map) cmd_map(cfg, n_points, resolution, x0s, y_max);
        if (*verify) cmd_verify(cfg, vx0, y0, start_re, start_im, r_cap, delta, verify_points, skip_domain);
        if (*moments) cmd_moments(cfg, ps, r_max);
        if (*list) cmd_catalog_list();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
