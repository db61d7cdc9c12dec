#pragma once

// Small 2-D geometry kit for rate-region polygons: convex hulls via the
// monotone chain and convex-polygon membership with a distance tolerance.

#include <algorithm>
#include <cmath>
#include <vector>

namespace gmacwt {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

inline double distance(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

// Convex polygon in the (R1, R2) plane: counterclockwise vertex order,
// first vertex lexicographically smallest, no repeated vertices within the
// merge tolerance. Degenerate regions reduce to a segment or a single point.
struct Polygon2D {
    std::vector<Point2> vertices;
};

inline constexpr double hull_cross_tolerance = 1e-12;
inline constexpr double vertex_merge_tolerance = 1e-9;

// Monotone-chain convex hull, counterclockwise. Collinear points within
// `cross_tol` are dropped; vertices closer than `merge_tol` are merged.
inline Polygon2D convex_hull(std::vector<Point2> points, double cross_tol = hull_cross_tolerance,
                             double merge_tol = vertex_merge_tolerance) {
    std::sort(points.begin(), points.end(), [](const Point2& a, const Point2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    points.erase(std::unique(points.begin(), points.end(),
                             [&](const Point2& a, const Point2& b) {
                                 return distance(a, b) <= merge_tol;
                             }),
                 points.end());
    if (points.size() <= 2) return Polygon2D{std::move(points)};

    std::vector<Point2> hull(2 * points.size());
    std::size_t n = 0;
    for (const Point2& p : points) {  // lower chain
        while (n >= 2 && cross(hull[n - 2], hull[n - 1], p) <= cross_tol) --n;
        hull[n++] = p;
    }
    const std::size_t lower = n + 1;
    for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {  // upper chain
        while (n >= lower && cross(hull[n - 2], hull[n - 1], *it) <= cross_tol) --n;
        hull[n++] = *it;
    }
    hull.resize(n - 1);  // last point equals the first

    // Merge any residual near-duplicates around the loop.
    std::vector<Point2> out;
    out.reserve(hull.size());
    for (const Point2& p : hull)
        if (out.empty() || distance(out.back(), p) > merge_tol) out.push_back(p);
    while (out.size() > 1 && distance(out.front(), out.back()) <= merge_tol) out.pop_back();
    return Polygon2D{std::move(out)};
}

// True iff `p` lies inside or within `tol` (euclidean distance) of the
// polygon. Handles the degenerate point and segment cases.
inline bool polygon_contains(const Polygon2D& poly, const Point2& p, double tol) {
    const auto& v = poly.vertices;
    if (v.empty()) return false;
    if (v.size() == 1) return distance(v[0], p) <= tol;

    auto near_segment = [&](const Point2& a, const Point2& b) {
        const double len2 = distance(a, b) * distance(a, b);
        double t = len2 > 0 ? ((p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y)) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        return distance({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}, p) <= tol;
    };
    if (v.size() == 2) return near_segment(v[0], v[1]);

    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        const double len = distance(a, b);
        if (len <= 0) continue;
        if (cross(a, b, p) < -tol * len) return false;  // right of a CCW edge
    }
    return true;
}

}  // namespace gmacwt
