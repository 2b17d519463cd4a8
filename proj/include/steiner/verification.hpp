#ifndef STEINER_VERIFICATION_HPP
#define STEINER_VERIFICATION_HPP

#include "steiner/arrangement.hpp"
#include "steiner/boundary_search.hpp"
#include "steiner/constrained.hpp"
#include "steiner/errors.hpp"
#include "steiner/general_position.hpp"
#include "steiner/parallel.hpp"
#include "steiner/region_search.hpp"
#include "steiner/triangulation.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace steiner {

struct OracleResult
{
    Point point;
    double value = -1;
    double step_x = 0, step_y = 0;
    std::size_t evaluations = 0;
    bool found = false;
};

/// Exhaustive search over the lattice that cuts the hull's bounding box into
/// resolution x resolution cells, so that doubling the resolution refines
/// it. Lattice points on an input point or segment are moved by half a
/// step; points outside the hull are skipped.
inline OracleResult grid_oracle(const std::vector<Point>& points, const ConstraintSet& constraints,
                                std::size_t resolution, unsigned threads = 1)
{
    if (resolution < 2)
        throw precondition_error("grid_oracle: resolution must be at least 2");
    const auto hull = detail::hull_of(points);
    double lo_x = hull[0].x, hi_x = lo_x, lo_y = hull[0].y, hi_y = lo_y;
    for (Point p : hull) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double sx = (hi_x - lo_x) / static_cast<double>(resolution);
    const double sy = (hi_y - lo_y) / static_cast<double>(resolution);
    std::optional<InsertionEvaluator> fast;
    if (constraints.empty())
        fast.emplace(points);
    auto eval = [&](Point p) {
        return fast ? (*fast)(p) : evaluate_insertion(points, constraints, p);
    };

    std::vector<OracleResult> rows(resolution + 1);
    parallel_for(resolution + 1, threads, [&](std::size_t i) {
        OracleResult& row = rows[i];
        for (std::size_t j = 0; j <= resolution; ++j) {
            Point p{lo_x + sx * static_cast<double>(i), lo_y + sy * static_cast<double>(j)};
            if (!strictly_inside_convex(hull, p))
                continue;
            double v;
            try {
                v = eval(p);
            } catch (const precondition_error&) {
                p = p + Point{0.5 * sx, 0.5 * sy};
                try {
                    v = eval(p);
                } catch (const precondition_error&) {
                    continue;
                }
            }
            ++row.evaluations;
            if (!row.found || v > row.value || (v == row.value && p < row.point)) {
                row.value = v;
                row.point = p;
                row.found = true;
            }
        }
    });
    OracleResult out;
    out.step_x = sx;
    out.step_y = sy;
    for (const OracleResult& row : rows) {
        out.evaluations += row.evaluations;
        if (row.found && (!out.found || row.value > out.value || (row.value == out.value && row.point < out.point))) {
            out.value = row.value;
            out.point = row.point;
            out.found = true;
        }
    }
    return out;
}

/// side x side unit grid whose top row is lowered onto a circle centred
/// above the grid, then jittered by at most epsilon. The other three sides
/// bow outward so that jitter cannot leave near-flat hull pockets. Jitter is
/// redrawn until the set is in strong general position.
inline std::vector<Point> perturbed_grid(std::size_t side, double epsilon, std::uint64_t seed)
{
    if (side < 3)
        throw precondition_error("perturbed_grid: side must be at least 3");
    if (!(epsilon > 0 && epsilon < 0.01))
        throw precondition_error("perturbed_grid: epsilon must be in (0, 0.01)");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-epsilon, epsilon);
    const double top = static_cast<double>(side - 1);
    const double half = 0.5 * top;
    // Offset at distance t from the middle of a side, for an arc through both
    // corners bulging by `sag` at the middle.
    auto bow = [&](double t, double sag) {
        const double r = (half * half + sag * sag) / (2 * sag);
        return std::sqrt(r * r - t * t) - (r - sag);
    };
    const double side_sag = 0.1 * half;
    std::vector<Point> base;
    base.reserve(side * side);
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i) {
            Point p{static_cast<double>(i), static_cast<double>(j)};
            if (j + 1 == side)
                p.y -= bow(p.x - half, 0.25);
            else if (j == 0)
                p.y -= bow(p.x - half, side_sag);
            if (i == 0 && j + 1 < side)
                p.x -= bow(p.y - half, side_sag);
            else if (i + 1 == side && j + 1 < side)
                p.x += bow(p.y - half, side_sag);
            base.push_back(p);
        }
    for (;;) {
        std::vector<Point> out = base;
        for (Point& p : out)
            p = p + Point{jitter(rng), jitter(rng)};
        if (general_position_check(out, GeneralPosition::strong).empty())
            return out;
    }
}

/// count / 3 nearly cocircular points on the lower half of the unit circle
/// and count / 3 segments, each cutting a small cap off the upper half.
inline ConstrainedInstance clipped_circle_family(std::size_t count, std::uint64_t seed)
{
    if (count < 6 || count % 3 != 0)
        throw precondition_error("clipped_circle_family: count must be a multiple of 3 and at least 6");
    const std::size_t m = count / 3;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> jitter(-1e-6, 1e-6);
    const double pi = std::numbers::pi;
    const double gap = pi / static_cast<double>(m + 1);
    ConstrainedInstance inst;
    for (std::size_t k = 0; k < m; ++k) {
        const double a = pi + gap * static_cast<double>(k + 1);
        const double r = 1 + jitter(rng);
        inst.points.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const double half = 0.45 * gap;
    const double h = 0.045 * gap * gap;
    for (std::size_t k = 0; k < m; ++k) {
        const double a = gap * static_cast<double>(k + 1) + jitter(rng);
        const Point dir{std::cos(a), std::sin(a)};
        const Point mid = dir * (1 - h);
        const Point along = perp(dir) * half;
        const VertexId i = inst.points.size();
        inst.points.push_back(mid - along);
        inst.points.push_back(mid + along);
        inst.constraints.segments.push_back({i, i + 1});
    }
    return inst;
}

/// Uniform points in the unit square, resampled until strong general
/// position holds.
inline std::vector<Point> random_instance(std::size_t n, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0, 1);
    for (;;) {
        std::vector<Point> pts(n);
        for (Point& p : pts)
            p = {u(rng), u(rng)};
        if (general_position_check(pts, GeneralPosition::strong).empty())
            return pts;
    }
}

struct CircleCheck
{
    std::size_t circle = 0;
    std::size_t f = 0, x = 0, d = 0;
    bool function_bound = true;
    bool crossing_depth = true;
};

struct MetricsReport
{
    ArrangementStats stats;
    std::vector<CircleCheck> circles;
    std::size_t sum_x = 0;
    bool sum_bound = true;
    std::size_t envelope_pieces = 0;
    std::size_t max_crossings = 0;
    std::size_t tangential = 0;
    std::size_t delta_violations = 0;
    double region_ms = 0;
    double boundary_ms = 0;
    // Inequalities are only checked without constraints.
    bool checked = true;
    std::optional<std::size_t> state_changes;

    std::size_t violations() const
    {
        std::size_t n = sum_bound ? 0 : 1;
        for (const auto& c : circles)
            n += !c.function_bound + !c.crossing_depth;
        return n;
    }

    /// One `name = value` per line.
    std::string to_text() const
    {
        std::ostringstream os;
        os << "v = " << stats.v << "\ne = " << stats.e << "\nf = " << stats.f << "\nk = " << stats.k
           << "\nd = " << stats.d << "\nd_hull = " << stats.d_hull << "\nd_bar = " << stats.d_bar
           << "\nm = " << stats.m << "\nX = " << stats.X << "\nu = " << stats.u << "\ne_dt = " << stats.e_dt
           << "\nsum_x = " << sum_x << "\nsum_x_bound = " << (sum_bound ? "pass" : "fail")
           << "\nenvelope_pieces = " << envelope_pieces << "\nmax_crossings = " << max_crossings
           << "\ntangential = " << tangential << "\ndelta_violations = " << delta_violations
           << "\nregion_ms = " << region_ms << "\nboundary_ms = " << boundary_ms << '\n';
        if (state_changes)
            os << "state_changes = " << *state_changes << '\n';
        if (!checked)
            os << "inequalities = skipped\n";
        for (const auto& c : circles)
            os << "circle." << c.circle << " = f " << c.f << " x " << c.x << " d " << c.d << " function_bound "
               << (c.function_bound ? "pass" : "fail") << " crossing_depth " << (c.crossing_depth ? "pass" : "fail")
               << '\n';
        os << "violations = " << violations() << '\n';
        return os.str();
    }
};

/// Checks f_i <= 15 x_i + 9, x_i >= d_i - 1 and sum x_i <= 6k.
inline MetricsReport verify_inequalities(const Triangulation& t, const Arrangement& arr,
                                         const std::vector<CircleDiagnostics>& diag)
{
    MetricsReport r;
    r.stats = stats(arr, &t);
    for (std::size_t c = 0; c < r.stats.m; ++c) {
        CircleCheck cc;
        cc.circle = c;
        cc.f = c < diag.size() ? diag[c].f : 0;
        cc.x = r.stats.x[c];
        cc.d = r.stats.d_i[c];
        cc.function_bound = cc.f <= 15 * cc.x + 9;
        cc.crossing_depth = cc.x + 1 >= cc.d;
        r.sum_x += cc.x;
        r.circles.push_back(cc);
    }
    r.sum_bound = r.sum_x <= 6 * r.stats.k;
    for (const auto& d : diag) {
        r.envelope_pieces += d.envelope_pieces;
        r.max_crossings = std::max(r.max_crossings, d.max_crossings);
        r.tangential += d.tangential;
        r.delta_violations += d.delta_violations;
    }
    return r;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

} // namespace detail

/// Runs both searches on the Delaunay triangulation of points and checks
/// the counting inequalities.
inline MetricsReport compute_metrics(const std::vector<Point>& points, unsigned threads = 1)
{
    const Triangulation t = build_delaunay(points);
    const Arrangement arr = build_arrangement(t);
    auto start = std::chrono::steady_clock::now();
    region_search(t, arr, threads);
    const double region_ms = detail::elapsed_ms(start);
    start = std::chrono::steady_clock::now();
    BoundarySearchOptions opt;
    opt.threads = threads;
    const BoundarySearchResult bnd = boundary_search(t, arr, opt);
    const double boundary_ms = detail::elapsed_ms(start);
    MetricsReport r = verify_inequalities(t, arr, bnd.circles);
    r.region_ms = region_ms;
    r.boundary_ms = boundary_ms;
    return r;
}

/// Constrained variant: arrangement statistics, search timings and the
/// number of hole state changes along circle edges.
inline MetricsReport compute_metrics(const ConstrainedInstance& inst, unsigned threads = 1)
{
    if (inst.constraints.empty())
        return compute_metrics(inst.points, threads);
    const ConstrainedContext ctx(inst, threads);
    MetricsReport r;
    r.checked = false;
    r.stats = stats(ctx.arrangement(), &ctx.triangulation());
    auto start = std::chrono::steady_clock::now();
    constrained_region_search(ctx, threads);
    r.region_ms = detail::elapsed_ms(start);
    start = std::chrono::steady_clock::now();
    const BoundarySearchResult bnd = constrained_boundary_search(ctx, threads);
    r.boundary_ms = detail::elapsed_ms(start);
    for (const auto& d : bnd.circles) {
        r.envelope_pieces += d.envelope_pieces;
        r.max_crossings = std::max(r.max_crossings, d.max_crossings);
        r.tangential += d.tangential;
        r.delta_violations += d.delta_violations;
    }
    r.state_changes = state_changes(ctx);
    return r;
}

} // namespace steiner

#endif // STEINER_VERIFICATION_HPP
