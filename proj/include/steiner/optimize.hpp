#ifndef STEINER_OPTIMIZE_HPP
#define STEINER_OPTIMIZE_HPP

#include "steiner/arrangement.hpp"
#include "steiner/boundary_search.hpp"
#include "steiner/constrained.hpp"
#include "steiner/region_search.hpp"
#include "steiner/triangulation.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace steiner {

enum class Provenance { cell, circle };

struct Timings
{
    double triangulate_ms = 0;
    double arrangement_ms = 0;
    double region_ms = 0;
    double boundary_ms = 0;
    double total_ms = 0;
};

struct PlacementResult
{
    Point point;
    double value = 0;
    // From a full rebuild of the triangulation with point inserted.
    double verified_value = 0;
    Provenance provenance = Provenance::cell;
    std::size_t face = no_index;
    std::size_t circle = no_index;
    double theta = 0;
    // Smallest angle of the input triangulation.
    double baseline = 0;
    bool constrained = false;
    ArrangementStats stats;
    std::vector<CircleDiagnostics> circles;
    std::size_t holes_solved = 0;
    std::size_t state_changes = 0;
    Timings timings;
    std::vector<std::string> warnings;
};

struct OptimizeOptions
{
    unsigned threads = 1;
    std::uint64_t seed = detail::default_seed;
};

namespace detail {

class Stopwatch
{
public:
    double lap()
    {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
        return ms;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

inline void collect_warnings(PlacementResult& r)
{
    std::size_t tangential = 0, delta = 0;
    for (const auto& c : r.circles) {
        tangential += c.tangential;
        delta += c.delta_violations;
    }
    if (tangential)
        r.warnings.push_back(std::to_string(tangential) + " tangential contacts between angle functions");
    if (delta)
        r.warnings.push_back(std::to_string(delta) + " vertex passings with an unexpected function-set change");
    if (std::abs(r.value - r.verified_value) > 1e-9)
        r.warnings.push_back("search value differs from the rebuilt triangulation by more than 1e-9");
}

inline void choose(PlacementResult& r, const std::optional<CellSolution>& cell,
                   const std::optional<BoundaryCandidate>& bnd)
{
    if (!cell && !bnd)
        throw structural_error("optimize: no admissible placement found");
    if (cell && (!bnd || cell->global_value >= bnd->value)) {
        r.point = cell->point;
        r.value = cell->global_value;
        r.provenance = Provenance::cell;
        r.face = cell->face;
    } else {
        r.point = bnd->point;
        r.value = bnd->value;
        r.provenance = Provenance::circle;
        r.circle = bnd->circle;
        r.theta = bnd->theta;
    }
}

} // namespace detail

/// Best single Steiner point for the (constrained) Delaunay triangulation of
/// points: the better of the cell-interior and circle-boundary searches.
inline PlacementResult optimize(const std::vector<Point>& points, const ConstraintSet& constraints = {},
                                const OptimizeOptions& opt = {})
{
    PlacementResult r;
    detail::Stopwatch total, sw;
    if (constraints.empty()) {
        const Triangulation t = build_delaunay(points, Cocircular::reject, opt.seed);
        r.timings.triangulate_ms = sw.lap();
        const Arrangement arr = build_arrangement(t);
        r.timings.arrangement_ms = sw.lap();
        const RegionSearchResult region = region_search(t, arr, opt.threads);
        r.timings.region_ms = sw.lap();
        BoundarySearchOptions bopt;
        bopt.threads = opt.threads;
        BoundarySearchResult bnd = boundary_search(t, arr, bopt);
        r.timings.boundary_ms = sw.lap();
        detail::choose(r, region.best, bnd.best);
        r.baseline = min_angle(t);
        r.stats = stats(arr, &t);
        r.circles = std::move(bnd.circles);
        r.holes_solved = region.holes_solved;
    } else {
        r.constrained = true;
        const ConstrainedContext ctx(ConstrainedInstance{points, constraints}, opt.threads);
        r.timings.arrangement_ms = sw.lap();
        const RegionSearchResult region = constrained_region_search(ctx, opt.threads);
        r.timings.region_ms = sw.lap();
        BoundarySearchResult bnd = constrained_boundary_search(ctx, opt.threads);
        r.timings.boundary_ms = sw.lap();
        detail::choose(r, region.best, bnd.best);
        r.baseline = min_angle(ctx.triangulation());
        r.stats = stats(ctx.arrangement(), &ctx.triangulation());
        r.circles = std::move(bnd.circles);
        r.holes_solved = region.holes_solved;
        r.state_changes = state_changes(ctx);
        for (const auto& s : constraints.segments)
            if (segment_distance(points[s[0]], points[s[1]], r.point) < merge_eps * ctx.arrangement().scale())
                r.warnings.push_back("chosen point is within tolerance of a constraint segment");
    }
    r.verified_value = evaluate_insertion(points, constraints, r.point);
    r.timings.total_ms = total.lap();
    detail::collect_warnings(r);
    return r;
}

} // namespace steiner

#endif // STEINER_OPTIMIZE_HPP
