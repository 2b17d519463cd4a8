#ifndef STEINER_REGION_SEARCH_HPP
#define STEINER_REGION_SEARCH_HPP

#include "steiner/arrangement.hpp"
#include "steiner/errors.hpp"
#include "steiner/geometry.hpp"
#include "steiner/parallel.hpp"
#include "steiner/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

namespace steiner {

/// Star-shaped polygon left by removing invalidated triangles. boundary is
/// counterclockwise; ids are triangulation vertex ids (or positions in
/// boundary for holes built from a bare polygon).
struct Hole
{
    std::vector<Point> boundary;
    std::vector<VertexId> ids;
    std::vector<TriangleId> triangles;
    std::vector<Point> kernel;
};

/// Intersection of the inner half-planes of a counterclockwise polygon.
inline std::vector<Point> polygon_kernel(const std::vector<Point>& boundary)
{
    double lo_x = boundary[0].x, hi_x = lo_x, lo_y = boundary[0].y, hi_y = lo_y;
    for (Point p : boundary) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    std::vector<Point> k{{lo_x, lo_y}, {hi_x, lo_y}, {hi_x, hi_y}, {lo_x, hi_y}};
    for (std::size_t i = 0, n = boundary.size(); i < n && !k.empty(); ++i) {
        const Point a = boundary[i], b = boundary[(i + 1) % n];
        k = clip_half_plane(k, a, perp(b - a));
    }
    // Clipping through a vertex repeats it; a zero-length edge would make
    // every strict containment test fail.
    const double tol = merge_eps * std::max({hi_x - lo_x, hi_y - lo_y, 1.0});
    std::vector<Point> out;
    for (Point p : k)
        if (out.empty() || distance(out.back(), p) > tol)
            out.push_back(p);
    while (out.size() > 1 && distance(out.front(), out.back()) <= tol)
        out.pop_back();
    return out;
}

inline Hole hole_from_polygon(std::vector<Point> boundary)
{
    if (boundary.size() < 3)
        throw precondition_error("hole: need at least three vertices");
    if (signed_area(boundary) < 0)
        std::reverse(boundary.begin(), boundary.end());
    Hole h;
    h.kernel = polygon_kernel(boundary);
    for (std::size_t i = 0; i < boundary.size(); ++i)
        h.ids.push_back(i);
    h.boundary = std::move(boundary);
    return h;
}

/// Hole formed by the union of the given triangles of t.
inline Hole hole_for(const Triangulation& t, const std::vector<TriangleId>& invalid)
{
    if (invalid.empty())
        throw precondition_error("hole_for: empty triangle set");
    std::set<std::pair<VertexId, VertexId>> directed;
    for (TriangleId i : invalid) {
        const auto& tri = t.triangles()[i];
        for (int k = 0; k < 3; ++k)
            directed.emplace(tri[k], tri[(k + 1) % 3]);
    }
    std::map<VertexId, VertexId> succ;
    for (const auto& [a, b] : directed)
        if (!directed.count({b, a}) && !succ.emplace(a, b).second)
            throw structural_error("hole_for: boundary is not simple");
    const VertexId start = succ.begin()->first;
    Hole h;
    h.triangles = invalid;
    VertexId v = start;
    do {
        h.ids.push_back(v);
        h.boundary.push_back(t.vertices()[v]);
        auto it = succ.find(v);
        if (it == succ.end() || h.ids.size() > succ.size())
            throw structural_error("hole_for: boundary is not a closed cycle");
        v = it->second;
    } while (v != start);
    if (h.ids.size() != succ.size() || h.ids.size() != invalid.size() + 2)
        throw structural_error("hole_for: union of triangles is not a simply connected fan");
    h.kernel = polygon_kernel(h.boundary);
    return h;
}

struct FanEvaluation
{
    double value;
    Point gradient;
};

/// Minimum fan angle at p with the gradient of one minimizing angle.
/// No kernel check.
inline FanEvaluation fan_evaluate(const std::vector<Point>& boundary, Point p)
{
    FanEvaluation best{std::numeric_limits<double>::infinity(), {}};
    for (std::size_t i = 0, n = boundary.size(); i < n; ++i) {
        const Point q = boundary[i], r = boundary[(i + 1) % n];
        const Point u = q - p, v = r - p;
        const double apex = std::atan2(std::abs(cross(u, v)), dot(u, v));
        if (apex < best.value)
            best = {apex, perp(u) / dot(u, u) - perp(v) / dot(v, v)};
        const double at_q = angle_between(q, p, r);
        if (at_q < best.value)
            best = {at_q, perp(p - q) / dot(p - q, p - q)};
        const double at_r = angle_between(r, q, p);
        if (at_r < best.value)
            best = {at_r, -perp(p - r) / dot(p - r, p - r)};
    }
    return best;
}

inline bool in_kernel(const Hole& h, Point p)
{
    for (std::size_t i = 0, n = h.boundary.size(); i < n; ++i)
        if (orient(h.boundary[i], h.boundary[(i + 1) % n], p) != Sign::positive)
            return false;
    return true;
}

/// Minimum over the 3k angles of the fan from p to the hole boundary.
inline double fan_min_angle(const Hole& h, Point p)
{
    if (!in_kernel(h, p))
        throw precondition_error("fan_min_angle: point is not strictly inside the kernel");
    return fan_evaluate(h.boundary, p).value;
}

/// p lies in the level set R(x): inside the kernel with every fan angle >= x.
inline bool level_membership(const Hole& h, Point p, double x)
{
    return in_kernel(h, p) && fan_evaluate(h.boundary, p).value >= x;
}

struct KernelOptimum
{
    Point point;
    double value = 0;
    std::size_t iterations = 0;
};

inline constexpr std::size_t kernel_iteration_cap = 400;

namespace detail {

inline double box_diagonal(const std::vector<Point>& poly)
{
    double lo_x = poly[0].x, hi_x = lo_x, lo_y = poly[0].y, hi_y = lo_y;
    for (Point p : poly) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

} // namespace detail

/// Cutting-plane maximization of the fan minimum angle over the kernel.
/// The superlevel sets are convex, so the half-plane through the current
/// centroid along the gradient of a minimizing angle keeps the optimum.
inline KernelOptimum optimize_in_kernel(const Hole& h)
{
    std::vector<Point> q = h.kernel;
    if (q.size() < 3)
        throw degeneracy_error("optimize_in_kernel: empty kernel");
    const double diam = detail::box_diagonal(q);
    const double area0 = signed_area(q);
    if (!(area0 > 1e-24 * diam * diam))
        throw degeneracy_error("optimize_in_kernel: kernel has zero area");
    KernelOptimum best;
    best.value = -1;
    for (std::size_t it = 0; it < kernel_iteration_cap; ++it) {
        const Point c = polygon_centroid(q);
        const FanEvaluation ev = fan_evaluate(h.boundary, c);
        best.iterations = it + 1;
        if (ev.value > best.value) {
            best.value = ev.value;
            best.point = c;
        }
        if (ev.gradient.x == 0 && ev.gradient.y == 0)
            break;
        q = clip_half_plane(q, c, ev.gradient);
        if (q.size() < 3)
            break;
        if (detail::box_diagonal(q) < 1e-10 * diam || signed_area(q) <= 1e-30 * diam * diam)
            break;
    }
    return best;
}

struct CellSolution
{
    std::size_t face = no_index;
    Point point;
    // Fan minimum angle at point.
    double value = 0;
    // Minimum with the untouched triangles of the triangulation.
    double global_value = 0;
    bool inside_cell = false;
    std::size_t iterations = 0;
};

/// Sorted minimum angles of every triangle; floor(excluded) is the smallest
/// one not in the excluded set.
class AngleFloor
{
public:
    explicit AngleFloor(const Triangulation& t)
    {
        for (TriangleId i = 0; i < t.size(); ++i)
            sorted_.emplace_back(triangle_min_angle(t, i), i);
        std::sort(sorted_.begin(), sorted_.end());
    }

    double operator()(const std::vector<TriangleId>& excluded) const
    {
        for (const auto& [a, i] : sorted_)
            if (std::find(excluded.begin(), excluded.end(), i) == excluded.end())
                return a;
        return std::numbers::pi;
    }

private:
    std::vector<std::pair<double, TriangleId>> sorted_;
};

struct RegionSearchResult
{
    std::optional<CellSolution> best;
    std::vector<CellSolution> cells;
    std::size_t holes_solved = 0;
};

using InvalidSetFn = std::function<std::vector<TriangleId>(std::size_t face)>;

/// Region search with a caller-supplied invalid set per face (used with
/// constraint segments, where the set is not the disk membership).
inline RegionSearchResult region_search_with(const Triangulation& t, const Arrangement& arr,
                                             const InvalidSetFn& invalid_of, unsigned threads = 1)
{
    const AngleFloor floor(t);
    std::vector<std::size_t> todo;
    for (const Face& f : arr.faces())
        if (f.inside_hull && f.resolved)
            todo.push_back(f.id);
    std::vector<std::vector<TriangleId>> sets(todo.size());
    for (std::size_t i = 0; i < todo.size(); ++i) {
        sets[i] = invalid_of(todo[i]);
        std::sort(sets[i].begin(), sets[i].end());
        if (sets[i].empty())
            throw structural_error("region_search: face inside the hull invalidates no triangle");
    }
    std::map<std::vector<TriangleId>, std::size_t> unique;
    std::vector<const std::vector<TriangleId>*> keys;
    for (const auto& s : sets)
        if (unique.emplace(s, keys.size()).second)
            keys.push_back(&s);
    std::vector<KernelOptimum> optima(keys.size());
    parallel_for(keys.size(), threads, [&](std::size_t i) { optima[i] = optimize_in_kernel(hole_for(t, *keys[i])); });

    RegionSearchResult out;
    out.holes_solved = keys.size();
    for (std::size_t i = 0; i < todo.size(); ++i) {
        const KernelOptimum& opt = optima[unique.at(sets[i])];
        CellSolution cs;
        cs.face = todo[i];
        cs.point = opt.point;
        cs.value = opt.value;
        cs.global_value = std::min(opt.value, floor(sets[i]));
        cs.iterations = opt.iterations;
        cs.inside_cell = arr.point_in_face(cs.face, cs.point) && arr.clearance(cs.point) > merge_eps * arr.scale();
        if (cs.inside_cell && (!out.best || cs.global_value > out.best->global_value))
            out.best = cs;
        out.cells.push_back(cs);
    }
    return out;
}

/// Best interior-of-cell placement over all faces of the Delaunay circle
/// arrangement; faces whose kernel optimum escapes are left to the
/// boundary search.
inline RegionSearchResult region_search(const Triangulation& t, const Arrangement& arr, unsigned threads = 1)
{
    return region_search_with(
        t, arr, [&](std::size_t f) { return arr.faces()[f].invalid_set; }, threads);
}

} // namespace steiner

#endif // STEINER_REGION_SEARCH_HPP
