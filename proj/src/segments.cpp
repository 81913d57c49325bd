#include "hinv/segments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hinv {

namespace {

constexpr std::size_t kLeafSize = 4;

double cross(ComplexPoint u, ComplexPoint v) { return u.real() * v.imag() - u.imag() * v.real(); }

Box box_of(const Segment& s)
{
    Box b;
    b.expand(s.a);
    b.expand(s.b);
    return b;
}

}  // namespace

void Box::expand(ComplexPoint p)
{
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
}

void Box::expand(const Box& o)
{
    x0 = std::min(x0, o.x0);
    x1 = std::max(x1, o.x1);
    y0 = std::min(y0, o.y0);
    y1 = std::max(y1, o.y1);
}

double Box::distance_to(ComplexPoint p) const
{
    const double dx = std::max({x0 - p.real(), 0.0, p.real() - x1});
    const double dy = std::max({y0 - p.imag(), 0.0, p.imag() - y1});
    return std::hypot(dx, dy);
}

double Box::diagonal() const
{
    if (x1 < x0) return 0.0;
    return std::hypot(x1 - x0, y1 - y0);
}

ComplexPoint closest_point(const Segment& s, ComplexPoint p)
{
    const ComplexPoint d = s.b - s.a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return s.a;
    const double u = std::clamp(((p - s.a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return s.a + u * d;
}

bool segments_cross(const Segment& s, const Segment& t, ComplexPoint* where)
{
    const ComplexPoint r = s.b - s.a, q = t.b - t.a;
    const double d1 = cross(r, t.a - s.a), d2 = cross(r, t.b - s.a);
    const double d3 = cross(q, s.a - t.a), d4 = cross(q, s.b - t.a);
    if (!((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0))) return false;
    if (!((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return false;
    if (where) *where = s.a + (d3 / (d3 - d4)) * r;
    return true;
}

SegmentTree::SegmentTree(std::vector<Segment> segments) : segments_(std::move(segments))
{
    if (segments_.empty()) throw std::invalid_argument("SegmentTree: no segments");
    order_.resize(segments_.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    nodes_.reserve(2 * segments_.size() / kLeafSize + 2);
    build(0, order_.size());
}

int SegmentTree::build(std::size_t begin, std::size_t end)
{
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({});
    Box box;
    for (std::size_t i = begin; i < end; ++i) box.expand(box_of(segments_[order_[i]]));
    nodes_[id].box = box;
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    if (end - begin <= kLeafSize) return id;

    const bool split_x = (box.x1 - box.x0) >= (box.y1 - box.y0);
    const std::size_t mid = begin + (end - begin) / 2;
    auto key = [&](std::size_t i) {
        const ComplexPoint c = 0.5 * (segments_[i].a + segments_[i].b);
        return split_x ? c.real() : c.imag();
    };
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
}

const Box& SegmentTree::bounds() const { return nodes_.front().box; }

SegmentTree::Nearest SegmentTree::nearest(ComplexPoint p) const
{
    Nearest best;
    int stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& n = nodes_[static_cast<std::size_t>(stack[--top])];
        if (n.box.distance_to(p) >= best.distance) continue;
        if (n.left < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i) {
                const std::size_t s = order_[i];
                const ComplexPoint c = closest_point(segments_[s], p);
                const double d = std::abs(c - p);
                if (d < best.distance) best = {d, c, s};
            }
            continue;
        }
        // Visit the nearer child first.
        const Node& l = nodes_[static_cast<std::size_t>(n.left)];
        const Node& r = nodes_[static_cast<std::size_t>(n.right)];
        if (l.box.distance_to(p) <= r.box.distance_to(p)) {
            stack[top++] = n.right;
            stack[top++] = n.left;
        } else {
            stack[top++] = n.left;
            stack[top++] = n.right;
        }
    }
    return best;
}

std::vector<std::size_t> SegmentTree::crossings(const Segment& s) const
{
    std::vector<std::size_t> out;
    const Box sb = box_of(s);
    int stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& n = nodes_[static_cast<std::size_t>(stack[--top])];
        if (!n.box.overlaps(sb)) continue;
        if (n.left < 0) {
            for (std::size_t i = n.begin; i < n.end; ++i)
                if (segments_cross(segments_[order_[i]], s)) out.push_back(order_[i]);
            continue;
        }
        stack[top++] = n.left;
        stack[top++] = n.right;
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace hinv
