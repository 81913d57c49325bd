#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hinv/map.hpp"

namespace hinv {

namespace {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt6(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

// Closed pieces repeat their first row at the end, the usual polyline closure convention.
std::string trace_to_csv(const BoundaryTrace& trace)
{
    std::string out = "x,re,im,component,piece\n";
    auto row = [&](std::size_t i) {
        out += fmt17(trace.params[i]) + "," + fmt17(trace.points[i].real()) + "," + fmt17(trace.points[i].imag()) +
               "," + std::to_string(trace.component_labels[i]) + "," + std::to_string(trace.piece_labels[i]) + "\n";
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        row(i);
        const bool last = i + 1 == trace.points.size() || trace.piece_labels[i + 1] != trace.piece_labels[i];
        if (!last) continue;
        const auto piece = static_cast<std::size_t>(trace.piece_labels[i]);
        if (piece < trace.piece_closed.size() && trace.piece_closed[piece]) row(start);
        start = i + 1;
    }
    return out;
}

BoundaryTrace trace_from_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,re,im,component", 0) != 0)
        throw std::invalid_argument("trace CSV: expected header x,re,im,component,piece");
    BoundaryTrace t;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        double x = 0, re = 0, im = 0;
        int comp = 0, piece = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%d,%d", &x, &re, &im, &comp, &piece) != 5)
            throw std::invalid_argument("trace CSV: malformed line " + std::to_string(line_no));
        t.params.push_back(x);
        t.points.emplace_back(re, im);
        t.component_labels.push_back(comp);
        t.piece_labels.push_back(piece);
    }
    // Detect closed pieces by a repeated first row and drop the repeat.
    BoundaryTrace out;
    std::size_t start = 0;
    for (std::size_t i = 0; i < t.points.size(); ++i) {
        const bool last = i + 1 == t.points.size() || t.piece_labels[i + 1] != t.piece_labels[i];
        if (!last) continue;
        std::size_t end = i + 1;
        bool closed = false;
        if (end - start >= 3 && t.params[i] == t.params[start] && t.points[i] == t.points[start]) {
            closed = true;
            --end;
        }
        const auto piece = static_cast<std::size_t>(t.piece_labels[start]);
        if (out.piece_closed.size() <= piece) out.piece_closed.resize(piece + 1, 0);
        out.piece_closed[piece] = closed ? 1 : 0;
        for (std::size_t k = start; k < end; ++k) {
            out.params.push_back(t.params[k]);
            out.points.push_back(t.points[k]);
            out.component_labels.push_back(t.component_labels[k]);
            out.piece_labels.push_back(t.piece_labels[k]);
        }
        start = i + 1;
    }
    if (!out.params.empty()) {
        const auto [lo, hi] = std::minmax_element(out.params.begin(), out.params.end());
        out.joint_period = 2.0 * std::ceil((*hi - *lo) / 2.0 - 1e-9);
        if (out.joint_period < 2.0) out.joint_period = 2.0;
    }
    return out;
}

std::string line_to_csv(const InteriorLine& line)
{
    std::string out = "x0,t,re,im\n";
    for (std::size_t i = 0; i < line.points.size(); ++i)
        out += fmt17(line.x0) + "," + fmt17(line.t[i]) + "," + fmt17(line.points[i].real()) + "," +
               fmt17(line.points[i].imag()) + "\n";
    return out;
}

std::string trace_to_svg(const BoundaryTrace& trace, const std::vector<InteriorLine>& lines, double view_radius)
{
    if (!(view_radius > 0.0)) {
        // Zoom to the bulk of the trace rather than the far ends of unbounded pieces.
        std::vector<double> mags;
        for (const auto& p : trace.points) mags.push_back(std::abs(p));
        std::sort(mags.begin(), mags.end());
        const double median = mags.empty() ? 1.0 : mags[mags.size() / 2];
        view_radius = std::min(mags.empty() ? 1.0 : mags.back(), 4.0 * median);
        view_radius = std::max(view_radius, 1.2) * 1.05;
    }
    const double r = view_radius;
    const double stroke = r / 300.0;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"" << fmt6(-r) << " "
       << fmt6(-r) << " " << fmt6(2 * r) << " " << fmt6(2 * r) << "\">\n";
    os << "<rect x=\"" << fmt6(-r) << "\" y=\"" << fmt6(-r) << "\" width=\"" << fmt6(2 * r) << "\" height=\""
       << fmt6(2 * r) << "\" fill=\"white\"/>\n";
    os << "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"" << fmt6(stroke)
       << "\"/>\n";

    // SVG's y axis points down, so the imaginary part is negated.
    auto emit = [&](const std::vector<ComplexPoint>& pts, const std::string& style) {
        if (pts.size() < 2) return;
        os << "<polyline fill=\"none\" " << style << " points=\"";
        for (const auto& p : pts) {
            const double x = std::clamp(p.real(), -100 * r, 100 * r);
            const double y = std::clamp(-p.imag(), -100 * r, 100 * r);
            os << fmt6(x) << "," << fmt6(y) << " ";
        }
        os << "\"/>\n";
    };

    std::size_t start = 0;
    for (std::size_t i = 0; i < trace.points.size(); ++i) {
        const bool last = i + 1 == trace.points.size() || trace.piece_labels[i + 1] != trace.piece_labels[i];
        if (!last) continue;
        std::vector<ComplexPoint> pts(trace.points.begin() + static_cast<std::ptrdiff_t>(start),
                                      trace.points.begin() + static_cast<std::ptrdiff_t>(i + 1));
        const auto piece = static_cast<std::size_t>(trace.piece_labels[i]);
        if (piece < trace.piece_closed.size() && trace.piece_closed[piece]) pts.push_back(pts.front());
        const char* colour = kPalette[static_cast<std::size_t>(trace.component_labels[i]) % 8];
        emit(pts, std::string("stroke=\"") + colour + "\" stroke-width=\"" + fmt6(2 * stroke) + "\"");
        start = i + 1;
    }
    for (const auto& line : lines)
        emit(line.points, "stroke=\"#555555\" stroke-dasharray=\"" + fmt6(6 * stroke) + "," + fmt6(4 * stroke) +
                              "\" stroke-width=\"" + fmt6(stroke) + "\"");
    os << "</svg>\n";
    return os.str();
}

}  // namespace hinv
