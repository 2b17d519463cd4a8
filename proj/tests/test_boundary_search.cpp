#include "steiner/boundary_search.hpp"
#include "steiner/optimize.hpp"
#include "steiner/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace steiner {
namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double angular_gap(double a, double b)
{
    const double d = std::fmod(std::abs(a - b), two_pi);
    return std::min(d, two_pi - d);
}

TEST(FunctionsOnCircle, LoneCircleHasNineFunctionsInside)
{
    const auto t = build_delaunay({{0, 0}, {1, 0}, {0.4, 0.9}});
    const auto arr = build_arrangement(t);
    const CircleFunctions cf = functions_on_circle(0, arr, t);
    EXPECT_EQ(detail::distinct_functions(cf.sides[0]), 9u);
    EXPECT_EQ(detail::distinct_functions(cf.sides[1]), 0u);
}

class RandomBoundary : public ::testing::TestWithParam<std::uint64_t>
{
protected:
    void SetUp() override
    {
        std::mt19937_64 rng(GetParam());
        points = random_instance(10, rng);
        t = build_delaunay(points);
        arr = build_arrangement(t);
    }

    std::vector<Point> points;
    Triangulation t;
    Arrangement arr;
};

TEST_P(RandomBoundary, FunctionCountWithinBound)
{
    const auto s = stats(arr, &t);
    const auto r = boundary_search(t, arr);
    for (const CircleDiagnostics& d : r.circles) {
        EXPECT_LE(d.f_inner, 15 * s.x[d.circle] + 9) << "circle " << d.circle;
        EXPECT_LE(d.f_outer, 15 * s.x[d.circle] + 9) << "circle " << d.circle;
        EXPECT_EQ(d.delta_violations, 0u) << "circle " << d.circle;
        EXPECT_LE(d.max_crossings, 16u);
    }
}

// A hull corner with a single triangle lies on one circle only and is not an
// arrangement vertex, but the fan still changes there.
TEST_P(RandomBoundary, SpanEndsLieAtVerticesOrInputPoints)
{
    for (std::size_t c = 0; c < arr.num_circles(); ++c) {
        const Circle& circ = arr.curves()[c].circle;
        std::vector<double> vertex_thetas;
        for (const ArrVertex& v : arr.vertices())
            if (std::abs(distance(v.p, circ.center) - circ.radius) <= 1e-9 * circ.radius)
                vertex_thetas.push_back(circ.theta_of(v.p));
        for (Point q : points)
            if (std::abs(distance(q, circ.center) - circ.radius) <= 1e-9 * circ.radius)
                vertex_thetas.push_back(circ.theta_of(q));
        const CircleFunctions cf = functions_on_circle(c, arr, t);
        for (int side = 0; side < 2; ++side)
            for (const auto& [lo, hi] : cf.spans[side])
                for (double end : {lo, hi}) {
                    double best = two_pi;
                    for (double th : vertex_thetas)
                        best = std::min(best, angular_gap(th, end));
                    EXPECT_LE(best, 1e-9) << "circle " << c << " side " << side;
                }
    }
}

TEST_P(RandomBoundary, DomainMidpointsReinsertIntoTheirFan)
{
    const auto hull = t.hull_polygon();
    std::size_t checked = 0;
    for (std::size_t c = 0; c < arr.num_circles(); ++c) {
        const Circle& circ = arr.curves()[c].circle;
        const CircleFunctions cf = functions_on_circle(c, arr, t);
        for (int side = 0; side < 2; ++side)
            for (std::size_t i = 0; i < cf.sides[side].size(); ++i) {
                const AngleFunction& f = cf.sides[side][i];
                const auto [lo, hi] = cf.spans[side][i];
                const double mid = 0.5 * (lo + hi);
                const Point dir{std::cos(mid), std::sin(mid)};
                const Point p = circ.center + dir * (circ.radius * (side == 0 ? 1 - 1e-7 : 1 + 1e-7));
                if (!strictly_inside_convex(hull, p))
                    continue;
                std::vector<TriangleId> invalid;
                for (TriangleId k = 0; k < t.size(); ++k) {
                    const auto [a, b, cc] = t.corners(k);
                    if (in_disk(a, b, cc, p) == Sign::positive)
                        invalid.push_back(k);
                }
                const Hole h = hole_for(t, invalid);
                bool found = false;
                for (std::size_t j = 0, n = h.ids.size(); j < n; ++j)
                    found = found || (h.ids[j] == f.q_id && h.ids[(j + 1) % n] == f.r_id);
                EXPECT_TRUE(found) << "circle " << c << " side " << side << " function " << i;
                ++checked;
            }
    }
    EXPECT_GT(checked, 0u);
}

TEST_P(RandomBoundary, ReportedValueIsVerified)
{
    const auto r = boundary_search(t, arr);
    ASSERT_TRUE(r.best);
    EXPECT_NEAR(r.best->value, evaluate_insertion(points, {}, r.best->point), 1e-6);
    EXPECT_GT(r.candidates_verified, 0u);
}

TEST_P(RandomBoundary, NoDenseCirclePointBeatsTheBest)
{
    const auto r = boundary_search(t, arr);
    ASSERT_TRUE(r.best);
    const auto hull = t.hull_polygon();
    const InsertionEvaluator eval(points);
    constexpr int samples = 200;
    for (std::size_t c = 0; c < arr.num_circles(); ++c) {
        const Circle& circ = arr.curves()[c].circle;
        for (int k = 0; k < samples; ++k) {
            const double th = two_pi * (k + 0.5) / samples;
            const Point dir{std::cos(th), std::sin(th)};
            for (double scale : {1 - 1e-9, 1 + 1e-9}) {
                const Point p = circ.center + dir * (circ.radius * scale);
                if (!strictly_inside_convex(hull, p))
                    continue;
                double v;
                try {
                    v = eval(p);
                } catch (const precondition_error&) {
                    continue;
                }
                EXPECT_LE(v, r.best->value + 1e-6) << "circle " << c << " theta " << th;
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomBoundary, ::testing::Range<std::uint64_t>(1, 9));

TEST(BoundarySearch, FanInstanceMatchesOracle)
{
    const std::vector<Point> pts{{0, 0}, {10, 0}, {5, 8}, {5, 3}};
    const PlacementResult r = optimize(pts);
    const OracleResult g = grid_oracle(pts, {}, 400);
    ASSERT_TRUE(g.found);
    EXPECT_GE(r.value, g.value - 1e-9);
    EXPECT_LE(r.value - g.value, 1e-3);
    EXPECT_NEAR(r.verified_value, r.value, 1e-9);
}

TEST(BoundarySearch, NotAboveInteriorOptimumOnEquilateral)
{
    const auto t = build_delaunay({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
    const auto arr = build_arrangement(t);
    const auto region = region_search(t, arr);
    const auto boundary = boundary_search(t, arr);
    ASSERT_TRUE(region.best);
    if (boundary.best) {
        EXPECT_LE(boundary.best->value, region.best->global_value + angle_eps);
    }
}

TEST(BoundarySearch, MirrorSymmetricInstance)
{
    const std::vector<Point> pts{{0, 0}, {10, 0}, {5, 8}, {5, 3}};
    std::vector<Point> mirrored;
    for (Point p : pts)
        mirrored.push_back({10 - p.x, p.y});
    const auto t = build_delaunay(pts);
    const auto tm = build_delaunay(mirrored);
    const auto a = boundary_search(t, build_arrangement(t));
    const auto b = boundary_search(tm, build_arrangement(tm));
    ASSERT_TRUE(a.best && b.best);
    EXPECT_NEAR(a.best->value, b.best->value, 1e-6);
    const Point back{10 - b.best->point.x, b.best->point.y};
    EXPECT_NEAR(evaluate_insertion(pts, {}, back), a.best->value, 1e-6);
}

} // namespace
} // namespace steiner
