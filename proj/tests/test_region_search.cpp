#include "steiner/region_search.hpp"
#include "steiner/verification.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace steiner {
namespace {

constexpr double pi = std::numbers::pi;

Hole regular_hole(std::size_t k, double phase = 0)
{
    std::vector<Point> b;
    for (std::size_t i = 0; i < k; ++i) {
        const double a = phase + 2 * pi * static_cast<double>(i) / static_cast<double>(k);
        b.push_back({std::cos(a), std::sin(a)});
    }
    return hole_from_polygon(b);
}

Hole equilateral_hole() { return hole_from_polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}); }
Hole square_hole() { return hole_from_polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}); }

Point random_in_kernel(const Hole& h, std::mt19937_64& rng)
{
    double lo_x = h.kernel[0].x, hi_x = lo_x, lo_y = h.kernel[0].y, hi_y = lo_y;
    for (Point p : h.kernel) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    std::uniform_real_distribution<double> ux(lo_x, hi_x), uy(lo_y, hi_y);
    for (;;) {
        const Point p{ux(rng), uy(rng)};
        if (in_kernel(h, p) && strictly_inside_convex(h.kernel, p))
            return p;
    }
}

// Holes of all resolved inside-hull faces of a random instance.
std::vector<Hole> random_holes(std::uint64_t seed, std::size_t n)
{
    std::mt19937_64 rng(seed);
    const auto t = build_delaunay(random_instance(n, rng));
    const auto arr = build_arrangement(t);
    std::vector<Hole> out;
    for (const Face& f : arr.faces())
        if (f.inside_hull && f.resolved)
            out.push_back(hole_for(t, f.invalid_set));
    return out;
}

TEST(FanMinAngle, Examples)
{
    EXPECT_NEAR(fan_min_angle(equilateral_hole(), {0.5, std::sqrt(3.0) / 6}), pi / 6, 1e-12);
    EXPECT_NEAR(fan_min_angle(regular_hole(6), {0, 0}), pi / 3, 1e-12);
    EXPECT_NEAR(fan_min_angle(square_hole(), {0, 0}), pi / 4, 1e-12);
    EXPECT_THROW(fan_min_angle(square_hole(), {2, 0}), precondition_error);
}

TEST(LevelMembership, Examples)
{
    const Hole hex = regular_hole(6);
    EXPECT_TRUE(level_membership(hex, {0, 0}, pi / 3 - 1e-12));
    EXPECT_FALSE(level_membership(hex, {0, 0}, pi / 3 + 0.01));
    EXPECT_FALSE(level_membership(hex, {5, 0}, 0));
}

TEST(HoleFor, SingleTriangleAndQuadrilateral)
{
    const auto t = build_delaunay({{0, 0}, {2, 0}, {2.2, 1.5}, {0.1, 1.2}});
    ASSERT_EQ(t.size(), 2u);
    const Hole one = hole_for(t, {0});
    EXPECT_EQ(one.boundary.size(), 3u);
    EXPECT_NEAR(std::abs(signed_area(one.kernel)), std::abs(signed_area(one.boundary)), 1e-12);
    const Hole both = hole_for(t, {0, 1});
    EXPECT_EQ(both.boundary.size(), 4u);
    EXPECT_GT(signed_area(both.boundary), 0);
    EXPECT_NEAR(signed_area(both.kernel), signed_area(both.boundary), 1e-12);
}

TEST(OptimizeInKernel, Examples)
{
    const auto eq = optimize_in_kernel(equilateral_hole());
    EXPECT_NEAR(eq.value, pi / 6, angle_eps);
    EXPECT_NEAR(eq.point.x, 0.5, 1e-6);
    EXPECT_NEAR(eq.point.y, std::sqrt(3.0) / 6, 1e-6);
    const auto hex = optimize_in_kernel(regular_hole(6, 0.1));
    EXPECT_NEAR(hex.value, pi / 3, angle_eps);
    EXPECT_NEAR(norm(hex.point), 0, 1e-6);
    const auto sq = optimize_in_kernel(square_hole());
    EXPECT_NEAR(sq.value, pi / 4, angle_eps);
    EXPECT_NEAR(norm(sq.point), 0, 1e-6);
}

TEST(OptimizeInKernel, DenseGridAgreesOnEquilateral)
{
    const Hole h = equilateral_hole();
    double best = 0;
    constexpr int steps = 300;
    for (int i = 1; i < steps; ++i)
        for (int j = 1; j < steps; ++j) {
            const Point p{static_cast<double>(i) / steps, static_cast<double>(j) / steps};
            if (in_kernel(h, p))
                best = std::max(best, fan_min_angle(h, p));
        }
    EXPECT_GE(optimize_in_kernel(h).value, best - angle_eps);
}

TEST(OptimizeInKernel, RejectsZeroAreaKernel)
{
    Hole h = square_hole();
    h.kernel = {{0, 0}, {1, 0}, {2, 0}};
    EXPECT_THROW(optimize_in_kernel(h), degeneracy_error);
}

TEST(RegionSearch, EquilateralInput)
{
    const auto t = build_delaunay({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
    const auto arr = build_arrangement(t);
    const auto r = region_search(t, arr);
    ASSERT_TRUE(r.best);
    EXPECT_NEAR(r.best->global_value, pi / 6, angle_eps);
    EXPECT_NEAR(r.best->point.x, 0.5, 1e-6);
    EXPECT_NEAR(r.best->point.y, std::sqrt(3.0) / 6, 1e-6);
    // Only the face inside the circle is solved; the depth-0 outer face is skipped.
    EXPECT_EQ(r.cells.size(), 1u);
    EXPECT_EQ(arr.faces()[r.cells[0].face].depth, 1u);
}

TEST(RegionSearch, CellSolutionInvariants)
{
    std::mt19937_64 rng(77);
    const auto t = build_delaunay(random_instance(10, rng));
    const auto arr = build_arrangement(t);
    const auto r = region_search(t, arr);
    for (const CellSolution& cs : r.cells) {
        const Hole h = hole_for(t, arr.faces()[cs.face].invalid_set);
        EXPECT_NEAR(cs.value, fan_min_angle(h, cs.point), angle_eps);
        if (cs.inside_cell) {
            EXPECT_EQ(arr.locate(cs.point), cs.face);
        }
        EXPECT_LE(cs.global_value, cs.value);
    }
}

class RandomHoles : public ::testing::TestWithParam<std::uint64_t>
{
protected:
    void SetUp() override { holes = random_holes(GetParam(), 9); }
    std::vector<Hole> holes;
};

TEST_P(RandomHoles, LevelSetsAreConvex)
{
    std::mt19937_64 rng(GetParam() * 31 + 1);
    for (const Hole& h : holes) {
        const double top = optimize_in_kernel(h).value;
        std::uniform_real_distribution<double> level(0, top);
        for (int k = 0; k < 50; ++k) {
            const double x = level(rng);
            const Point a = random_in_kernel(h, rng), b = random_in_kernel(h, rng);
            if (!level_membership(h, a, x) || !level_membership(h, b, x))
                continue;
            EXPECT_TRUE(level_membership(h, (a + b) / 2.0, x - angle_eps));
        }
    }
}

TEST_P(RandomHoles, LevelSetsNest)
{
    std::mt19937_64 rng(GetParam() * 37 + 2);
    for (const Hole& h : holes) {
        const double top = optimize_in_kernel(h).value;
        std::uniform_real_distribution<double> level(0, top);
        for (int k = 0; k < 50; ++k) {
            double x = level(rng), y = level(rng);
            if (x > y)
                std::swap(x, y);
            const Point p = random_in_kernel(h, rng);
            if (level_membership(h, p, y)) {
                EXPECT_TRUE(level_membership(h, p, x));
            }
        }
    }
}

TEST_P(RandomHoles, OptimumDominatesRandomKernelPoints)
{
    std::mt19937_64 rng(GetParam() * 41 + 3);
    for (const Hole& h : holes) {
        const auto opt = optimize_in_kernel(h);
        EXPECT_NEAR(opt.value, fan_min_angle(h, opt.point), 1e-15);
        for (int k = 0; k < 1000; ++k)
            EXPECT_GE(opt.value, fan_min_angle(h, random_in_kernel(h, rng)) - angle_eps);
    }
}

TEST_P(RandomHoles, UnimodalAlongChords)
{
    std::mt19937_64 rng(GetParam() * 43 + 4);
    for (const Hole& h : holes) {
        for (int k = 0; k < 10; ++k) {
            const Point a = random_in_kernel(h, rng), b = random_in_kernel(h, rng);
            constexpr int samples = 200;
            std::vector<double> v;
            for (int i = 0; i <= samples; ++i)
                v.push_back(fan_min_angle(h, a + (b - a) * (static_cast<double>(i) / samples)));
            const auto peak = std::max_element(v.begin(), v.end()) - v.begin();
            for (int i = 0; i < peak; ++i)
                EXPECT_LE(v[i], v[i + 1] + angle_eps);
            for (int i = static_cast<int>(peak); i < samples; ++i)
                EXPECT_GE(v[i] + angle_eps, v[i + 1]);
        }
    }
}

TEST_P(RandomHoles, GradientMatchesFiniteDifferences)
{
    std::mt19937_64 rng(GetParam() * 47 + 5);
    for (const Hole& h : holes) {
        for (int k = 0; k < 20; ++k) {
            const Point p = random_in_kernel(h, rng);
            const auto ev = fan_evaluate(h.boundary, p);
            constexpr double step = 1e-7;
            const double fx = (fan_evaluate(h.boundary, p + Point{step, 0}).value -
                               fan_evaluate(h.boundary, p - Point{step, 0}).value) /
                              (2 * step);
            const double fy = (fan_evaluate(h.boundary, p + Point{0, step}).value -
                               fan_evaluate(h.boundary, p - Point{0, step}).value) /
                              (2 * step);
            const auto right = fan_evaluate(h.boundary, p + Point{step, 0});
            const auto up = fan_evaluate(h.boundary, p + Point{0, step});
            // Near a tie for the minimum the gradient jumps; skip those points.
            if (norm(right.gradient - ev.gradient) > 1e-3 * norm(ev.gradient) ||
                norm(up.gradient - ev.gradient) > 1e-3 * norm(ev.gradient))
                continue;
            const double tol = 1e-5 * std::max(1.0, norm(ev.gradient));
            EXPECT_NEAR(ev.gradient.x, fx, tol);
            EXPECT_NEAR(ev.gradient.y, fy, tol);
        }
    }
}

TEST_P(RandomHoles, FaceSamplesLieInKernel)
{
    std::mt19937_64 rng(GetParam());
    const auto t = build_delaunay(random_instance(9, rng));
    const auto arr = build_arrangement(t);
    for (const Face& f : arr.faces())
        if (f.inside_hull && f.resolved) {
            const Hole h = hole_for(t, f.invalid_set);
            EXPECT_TRUE(in_kernel(h, f.hull_sample));
        }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomHoles, ::testing::Range<std::uint64_t>(1, 9));

} // namespace
} // namespace steiner
