#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

namespace hinv {

using ComplexPoint = std::complex<double>;

struct Segment {
    ComplexPoint a;
    ComplexPoint b;
};

struct Box {
    double x0 = std::numeric_limits<double>::infinity();
    double y0 = std::numeric_limits<double>::infinity();
    double x1 = -std::numeric_limits<double>::infinity();
    double y1 = -std::numeric_limits<double>::infinity();

    void expand(ComplexPoint p);
    void expand(const Box& o);
    bool overlaps(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
    double distance_to(ComplexPoint p) const;
    double diagonal() const;
};

/// Closest point of segment s to p.
ComplexPoint closest_point(const Segment& s, ComplexPoint p);

/// True when the open segments intersect at a single interior point (touching does not count).
bool segments_cross(const Segment& s, const Segment& t, ComplexPoint* where = nullptr);

/// Bounding-volume hierarchy over line segments for nearest-point and crossing queries.
class SegmentTree {
public:
    explicit SegmentTree(std::vector<Segment> segments);

    struct Nearest {
        double distance = std::numeric_limits<double>::infinity();
        ComplexPoint point;
        std::size_t index = 0;
    };

    Nearest nearest(ComplexPoint p) const;
    /// Indices of segments properly crossed by s.
    std::vector<std::size_t> crossings(const Segment& s) const;
    const Box& bounds() const;
    const std::vector<Segment>& segments() const { return segments_; }

private:
    struct Node {
        Box box;
        std::size_t begin = 0, end = 0;  // range in order_ for leaves
        int left = -1, right = -1;
    };

    int build(std::size_t begin, std::size_t end);

    std::vector<Segment> segments_;
    std::vector<std::size_t> order_;
    std::vector<Node> nodes_;
};

}  // namespace hinv
