#ifndef STEINER_CONSTRAINED_HPP
#define STEINER_CONSTRAINED_HPP

#include "steiner/arrangement.hpp"
#include "steiner/boundary_search.hpp"
#include "steiner/errors.hpp"
#include "steiner/parallel.hpp"
#include "steiner/region_search.hpp"
#include "steiner/triangulation.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <set>
#include <vector>

namespace steiner {

struct ConstrainedInstance
{
    std::vector<Point> points;
    ConstraintSet constraints;
};

namespace detail {

inline std::array<VertexId, 3> sorted_triple(std::array<VertexId, 3> t)
{
    std::sort(t.begin(), t.end());
    return t;
}

} // namespace detail

/// Triangles of the base CDT that disappear when sample is inserted and the
/// CDT is rebuilt from scratch.
inline std::vector<TriangleId> constrained_invalid_set(const ConstrainedInstance& inst, const Triangulation& base,
                                                       Point sample)
{
    detail::check_insertion_point(inst.points, inst.constraints, base.hull_polygon(), sample);
    std::vector<Point> all = inst.points;
    all.push_back(sample);
    const Triangulation after = build_cdt(all, inst.constraints);
    std::set<std::array<VertexId, 3>> kept;
    for (const auto& tri : after.triangles())
        kept.insert(detail::sorted_triple(tri));
    std::vector<TriangleId> out;
    for (TriangleId i = 0; i < base.size(); ++i)
        if (!kept.count(detail::sorted_triple(base.triangles()[i])))
            out.push_back(i);
    return out;
}

/// Base CDT, arrangement of its circles and segments, and the invalid set of
/// every face (empty outside the hull), computed once.
class ConstrainedContext
{
public:
    explicit ConstrainedContext(ConstrainedInstance inst, unsigned threads = 1)
        : inst_(std::move(inst)), t_(build_cdt(inst_.points, inst_.constraints)),
          arr_(build_arrangement(t_, true)), evaluator_(inst_.points)
    {
        invalid_.resize(arr_.faces().size());
        parallel_for(arr_.faces().size(), threads, [&](std::size_t f) {
            const Face& face = arr_.faces()[f];
            if (face.inside_hull && face.resolved && face.depth > 0)
                invalid_[f] = constrained_invalid_set(inst_, t_, face.hull_sample);
        });
    }

    const ConstrainedInstance& instance() const { return inst_; }
    const Triangulation& triangulation() const { return t_; }
    const Arrangement& arrangement() const { return arr_; }
    const std::vector<TriangleId>& invalid_set(std::size_t face) const { return invalid_.at(face); }

    InvalidSetFn invalid_fn() const
    {
        return [this](std::size_t f) { return invalid_.at(f); };
    }

    double evaluate(Point p) const
    {
        if (inst_.constraints.empty())
            return evaluator_(p);
        return evaluate_insertion(inst_.points, inst_.constraints, p);
    }

private:
    ConstrainedInstance inst_;
    Triangulation t_;
    Arrangement arr_;
    InsertionEvaluator evaluator_;
    std::vector<std::vector<TriangleId>> invalid_;
};

/// Region search with constrained holes.
inline RegionSearchResult constrained_region_search(const ConstrainedContext& ctx, unsigned threads = 1)
{
    return region_search_with(ctx.triangulation(), ctx.arrangement(), ctx.invalid_fn(), threads);
}

/// Boundary search with per-edge function sets; constraint segments are not
/// searched as placement loci.
inline BoundarySearchResult constrained_boundary_search(const ConstrainedContext& ctx, unsigned threads = 1)
{
    BoundarySearchOptions opt;
    opt.per_edge = true;
    opt.threads = threads;
    return boundary_search_with(
        ctx.triangulation(), ctx.arrangement(), ctx.invalid_fn(), [&](Point p) { return ctx.evaluate(p); }, opt);
}

/// Sum over circles and sides of |inv(a) xor inv(b)| for consecutive edges
/// a, b along the circle: how often a triangle enters or leaves the hole.
inline std::size_t state_changes(const ConstrainedContext& ctx)
{
    const Arrangement& arr = ctx.arrangement();
    std::size_t total = 0;
    for (std::size_t c = 0; c < arr.num_circles(); ++c) {
        const auto& edges = arr.curve_edges(c);
        if (edges.size() < 2)
            continue;
        for (int side = 0; side < 2; ++side)
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const std::size_t e1 = edges[i], e2 = edges[(i + 1) % edges.size()];
                const std::size_t f1 = side == 0 ? arr.inner_face(e1) : arr.outer_face(e1);
                const std::size_t f2 = side == 0 ? arr.inner_face(e2) : arr.outer_face(e2);
                std::vector<TriangleId> diff;
                const auto& a = ctx.invalid_set(f1);
                const auto& b = ctx.invalid_set(f2);
                std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
                total += diff.size();
            }
    }
    return total;
}

struct ConstrainedResult
{
    Point point;
    double value = 0;
    // Value from a from-scratch CDT of points + {point}.
    double verified_value = 0;
    std::optional<CellSolution> region;
    std::optional<BoundaryCandidate> boundary;
    bool from_boundary = false;
    // Distance to the nearest constraint segment is below merge_eps * scale.
    bool near_segment = false;
    RegionSearchResult region_result;
    BoundarySearchResult boundary_result;
};

inline double segment_distance(Point a, Point b, Point p)
{
    const Point d = b - a;
    const double s = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
    return distance(p, a + d * s);
}

/// Best insertion point for a constrained instance: the larger of the
/// constrained region and boundary searches, re-verified by rebuilding.
inline ConstrainedResult constrained_optimize(const ConstrainedContext& ctx, unsigned threads = 1)
{
    ConstrainedResult out;
    out.region_result = constrained_region_search(ctx, threads);
    out.boundary_result = constrained_boundary_search(ctx, threads);
    out.region = out.region_result.best;
    out.boundary = out.boundary_result.best;
    if (!out.region && !out.boundary)
        throw structural_error("constrained_optimize: no admissible placement found");
    if (out.region && (!out.boundary || out.region->global_value >= out.boundary->value)) {
        out.point = out.region->point;
        out.value = out.region->global_value;
    } else {
        out.point = out.boundary->point;
        out.value = out.boundary->value;
        out.from_boundary = true;
    }
    const auto& inst = ctx.instance();
    out.verified_value = evaluate_insertion(inst.points, inst.constraints, out.point);
    for (const auto& s : inst.constraints.segments)
        if (segment_distance(inst.points[s[0]], inst.points[s[1]], out.point) <
            merge_eps * ctx.arrangement().scale())
            out.near_segment = true;
    return out;
}

inline ConstrainedResult constrained_optimize(const ConstrainedInstance& inst, unsigned threads = 1)
{
    return constrained_optimize(ConstrainedContext(inst, threads), threads);
}

} // namespace steiner

#endif // STEINER_CONSTRAINED_HPP
