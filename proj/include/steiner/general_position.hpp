#ifndef STEINER_GENERAL_POSITION_HPP
#define STEINER_GENERAL_POSITION_HPP

#include "steiner/geometry.hpp"
#include "steiner/triangulation.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace steiner {

enum class ViolationKind { duplicate, collinear, cocircular, concurrent_circles };

inline const char* to_string(ViolationKind k)
{
    switch (k) {
    case ViolationKind::duplicate:
        return "duplicate";
    case ViolationKind::collinear:
        return "collinear";
    case ViolationKind::cocircular:
        return "cocircular";
    case ViolationKind::concurrent_circles:
        return "concurrent_circles";
    }
    return "unknown";
}

/// Point indices for duplicate/collinear/cocircular; triangle (circle)
/// indices for concurrent_circles.
struct Violation
{
    ViolationKind kind;
    std::vector<std::size_t> indices;
};

enum class GeneralPosition { basic, strong };

namespace detail {

// Above this size cocircularity is only checked where it makes the
// Delaunay triangulation ambiguous.
inline constexpr std::size_t exhaustive_cocircular_limit = 100;

inline void cocircular_exhaustive(const std::vector<Point>& pts, std::vector<Violation>& out)
{
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                const Sign o = orient(pts[i], pts[j], pts[k]);
                if (o == Sign::zero)
                    continue;
                for (std::size_t l = k + 1; l < n; ++l) {
                    const Sign s = o == Sign::positive ? in_disk(pts[i], pts[j], pts[k], pts[l])
                                                       : in_disk(pts[i], pts[k], pts[j], pts[l]);
                    if (s == Sign::zero)
                        out.push_back({ViolationKind::cocircular, {i, j, k, l}});
                }
            }
}

inline void cocircular_delaunay(const std::vector<Point>& pts, std::vector<Violation>& out)
{
    DelaunayBuilder builder(pts);
    builder.build(default_seed);
    FlipMesh mesh(pts, builder.finite_triangles());
    for (const Edge& e : mesh.all_edges()) {
        if (!mesh.interior(e) || mesh.incircle(e) != Sign::zero)
            continue;
        auto q = mesh.quad(e);
        std::vector<std::size_t> idx(q.begin(), q.end());
        std::sort(idx.begin(), idx.end());
        out.push_back({ViolationKind::cocircular, idx});
    }
}

/// Intersection points of two Delaunay circles that are not shared
/// triangle vertices.
inline std::vector<Point> free_intersections(const Triangulation& t, const std::vector<DelaunayCircle>& circles,
                                             std::size_t i, std::size_t j)
{
    const auto& ti = t.triangles()[i];
    const auto& tj = t.triangles()[j];
    std::vector<VertexId> shared;
    for (VertexId a : ti)
        if (std::find(tj.begin(), tj.end(), a) != tj.end())
            shared.push_back(a);
    const Circle& ci = circles[i].circle;
    const Circle& cj = circles[j].circle;
    if (shared.size() >= 2)
        return {};
    if (shared.size() == 1) {
        // Second intersection is the mirror image across the line of centers.
        const Point a = t.vertices()[shared[0]];
        const Point d = cj.center - ci.center;
        const double len2 = dot(d, d);
        const Point foot = ci.center + d * (dot(a - ci.center, d) / len2);
        const Point m = foot * 2.0 - a;
        if (distance(m, a) <= merge_eps * std::max(ci.radius, cj.radius))
            return {};
        return {m};
    }
    return circle_intersections(ci, cj);
}

} // namespace detail

/// Relative tolerance within which a third Delaunay circle is considered to
/// pass through an intersection point of two others.
inline constexpr double concurrency_eps = 1e-10;

/// Violations of general position. Basic: duplicates, collinear triples,
/// cocircular quadruples. Strong additionally reports non-input points where
/// three or more Delaunay circles meet.
inline std::vector<Violation> general_position_check(const std::vector<Point>& pts,
                                                     GeneralPosition mode = GeneralPosition::basic)
{
    std::vector<Violation> out;
    const std::size_t n = pts.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pts[i] == pts[j])
                out.push_back({ViolationKind::duplicate, {i, j}});
    if (!out.empty())
        return out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k)
                if (orient(pts[i], pts[j], pts[k]) == Sign::zero)
                    out.push_back({ViolationKind::collinear, {i, j, k}});
    if (n < 4)
        return out;
    if (n <= detail::exhaustive_cocircular_limit)
        detail::cocircular_exhaustive(pts, out);
    else if (out.empty())
        detail::cocircular_delaunay(pts, out);
    if (mode == GeneralPosition::basic || !out.empty())
        return out;

    const Triangulation t = build_delaunay(pts);
    const auto circles = delaunay_circles(t);
    const std::size_t m = circles.size();
    // Absolute floor matching the arrangement's vertex merge tolerance.
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x, hi_x = -lo_x, hi_y = -lo_x;
    for (const auto& dc : circles) {
        lo_x = std::min(lo_x, dc.circle.center.x - dc.circle.radius);
        lo_y = std::min(lo_y, dc.circle.center.y - dc.circle.radius);
        hi_x = std::max(hi_x, dc.circle.center.x + dc.circle.radius);
        hi_y = std::max(hi_y, dc.circle.center.y + dc.circle.radius);
    }
    const double floor = merge_eps * std::max(hi_x - lo_x, hi_y - lo_y);
    std::set<std::vector<std::size_t>> seen;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            const Circle& ci = circles[i].circle;
            const Circle& cj = circles[j].circle;
            if (distance(ci.center, cj.center) > ci.radius + cj.radius)
                continue;
            for (Point x : detail::free_intersections(t, circles, i, j)) {
                std::vector<std::size_t> through{i, j};
                for (std::size_t k = 0; k < m; ++k) {
                    if (k == i || k == j)
                        continue;
                    const Circle& ck = circles[k].circle;
                    const double tol = std::max(concurrency_eps * ck.radius, floor);
                    if (std::abs(distance(x, ck.center) - ck.radius) <= tol)
                        through.push_back(k);
                }
                if (through.size() < 3)
                    continue;
                std::sort(through.begin(), through.end());
                if (seen.insert(through).second)
                    out.push_back({ViolationKind::concurrent_circles, through});
            }
        }
    return out;
}

inline std::string describe(const Violation& v)
{
    std::string s = to_string(v.kind);
    s += ':';
    for (std::size_t i : v.indices)
        s += ' ' + std::to_string(i);
    return s;
}

} // namespace steiner

#endif // STEINER_GENERAL_POSITION_HPP
