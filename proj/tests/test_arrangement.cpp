#include "steiner/arrangement.hpp"
#include "steiner/verification.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <iterator>
#include <numeric>
#include <random>

namespace steiner {
namespace {

std::size_t components(const Arrangement& arr)
{
    std::vector<std::size_t> parent(arr.vertices().size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const ArrEdge& e : arr.edges())
        parent[find(e.from)] = find(e.to);
    std::size_t n = 0;
    for (std::size_t v = 0; v < parent.size(); ++v)
        n += find(v) == v;
    return n;
}

void expect_euler(const Arrangement& arr)
{
    const auto v = static_cast<long>(arr.vertices().size());
    const auto e = static_cast<long>(arr.edges().size());
    const auto f = static_cast<long>(arr.faces().size());
    EXPECT_EQ(v - e + f, 1 + static_cast<long>(components(arr)));
}

std::size_t brute_depth(const Arrangement& arr, Point q)
{
    std::size_t d = 0;
    for (std::size_t c = 0; c < arr.num_circles(); ++c) {
        const Circle& circ = arr.curves()[c].circle;
        d += distance(q, circ.center) < circ.radius;
    }
    return d;
}

TEST(BuildArrangement, OneCircle)
{
    const auto arr = build_arrangement(std::vector<Circle>{{{0, 0}, 1}});
    const auto s = stats(arr);
    EXPECT_EQ(s.v, 0u);
    EXPECT_EQ(s.e, 1u);
    EXPECT_EQ(s.f, 2u);
    EXPECT_EQ(s.k, 3u);
    EXPECT_EQ(s.d, 1u);
    EXPECT_EQ(s.X, 0u);
    EXPECT_EQ(arr.faces()[arr.locate({0, 0})].depth, 1u);
    EXPECT_EQ(arr.faces()[arr.locate({3, 0})].depth, 0u);
    expect_euler(arr);
}

TEST(BuildArrangement, TwoCrossingCircles)
{
    const auto arr = build_arrangement(std::vector<Circle>{{{0, 0}, 1}, {{1, 0}, 1}});
    const auto s = stats(arr);
    EXPECT_EQ(s.v, 2u);
    EXPECT_EQ(s.e, 4u);
    EXPECT_EQ(s.f, 4u);
    EXPECT_EQ(s.k, 10u);
    EXPECT_EQ(s.d, 2u);
    EXPECT_EQ(s.X, 1u);
    EXPECT_EQ(s.x, (std::vector<std::size_t>{1, 1}));
    EXPECT_EQ(s.u, 2u);
    const Face& lens = arr.faces()[arr.locate({0.5, 0})];
    EXPECT_EQ(lens.depth, 2u);
    EXPECT_EQ(lens.invalid_set, (std::vector<std::size_t>{0, 1}));
    expect_euler(arr);
}

TEST(BuildArrangement, TwoDisjointCircles)
{
    const auto arr = build_arrangement(std::vector<Circle>{{{0, 0}, 1}, {{5, 0}, 1}});
    const auto s = stats(arr);
    EXPECT_EQ(s.v, 0u);
    EXPECT_EQ(s.e, 2u);
    EXPECT_EQ(s.f, 3u);
    EXPECT_EQ(s.k, 5u);
    expect_euler(arr);
}

TEST(BuildArrangement, RejectsDuplicateCircles)
{
    EXPECT_THROW(build_arrangement(std::vector<Circle>{{{0, 0}, 1}, {{0, 0}, 1}}), precondition_error);
}

TEST(Locate, PointOnCurveIsAmbiguous)
{
    const auto arr = build_arrangement(std::vector<Circle>{{{0, 0}, 1}});
    EXPECT_THROW(arr.locate({1, 0}), degeneracy_error);
}

TEST(TraverseFaces, SingleTriangle)
{
    const auto t = build_delaunay({{0, 0}, {1, 0}, {0.5, 0.8}});
    const auto arr = build_arrangement(t);
    ASSERT_EQ(arr.traversal().size(), 2u);
    const FaceVisit& first = arr.traversal()[0];
    EXPECT_EQ(first.parent, no_index);
    EXPECT_TRUE(arr.faces()[first.face].invalid_set.empty());
    const FaceVisit& second = arr.traversal()[1];
    EXPECT_EQ(second.added, 0u);
    EXPECT_EQ(arr.faces()[second.face].invalid_set, (std::vector<std::size_t>{0}));
}

class RandomArrangement : public ::testing::TestWithParam<std::uint64_t>
{
protected:
    void SetUp() override
    {
        std::mt19937_64 rng(GetParam());
        t = build_delaunay(random_instance(10, rng));
        arr = build_arrangement(t);
    }

    Triangulation t;
    Arrangement arr;
};

TEST_P(RandomArrangement, EulerRelation) { expect_euler(arr); }

TEST_P(RandomArrangement, FaceSetsMatchDiskMembership)
{
    const auto circles = delaunay_circles(t);
    for (const Face& f : arr.faces()) {
        if (!f.resolved)
            continue;
        std::vector<std::size_t> brute;
        for (const auto& dc : circles) {
            const auto [a, b, c] = t.corners(dc.triangle);
            if (in_disk(a, b, c, f.sample) == Sign::positive)
                brute.push_back(dc.triangle);
        }
        EXPECT_EQ(f.invalid_set, brute) << "face " << f.id;
        EXPECT_EQ(f.depth, f.invalid_set.size());
        EXPECT_EQ(f.depth, brute_depth(arr, f.sample));
        EXPECT_EQ(arr.locate(f.sample), f.id);
    }
}

TEST_P(RandomArrangement, CrossingAnArcChangesOneTriangle)
{
    for (std::size_t e = 0; e < arr.edges().size(); ++e) {
        const auto& a = arr.faces()[arr.inner_face(e)].invalid_set;
        const auto& b = arr.faces()[arr.outer_face(e)].invalid_set;
        std::vector<std::size_t> diff;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
        ASSERT_EQ(diff.size(), 1u);
        EXPECT_EQ(diff[0], arr.edges()[e].curve);
        EXPECT_EQ(arr.faces()[arr.inner_face(e)].depth, arr.faces()[arr.outer_face(e)].depth + 1);
    }
}

TEST_P(RandomArrangement, VertexDegrees)
{
    for (const ArrVertex& v : arr.vertices()) {
        EXPECT_EQ(v.out.size() % 2, 0u);
        if (!v.artificial && v.out.size() >= 6) {
            EXPECT_NE(v.anchor, no_index);
        }
    }
}

TEST_P(RandomArrangement, TraversalVisitsEveryFaceOnceWithUnitDeltas)
{
    std::vector<int> seen(arr.faces().size(), 0);
    for (const FaceVisit& v : arr.traversal()) {
        ++seen[v.face];
        if (v.parent == no_index) {
            EXPECT_EQ(arr.faces()[v.face].depth, 0u);
            continue;
        }
        EXPECT_NE(v.added == no_index, v.removed == no_index);
        std::vector<std::size_t> expect = arr.faces()[v.parent].invalid_set;
        if (v.added != no_index)
            expect.push_back(v.added);
        else
            std::erase(expect, v.removed);
        std::sort(expect.begin(), expect.end());
        EXPECT_EQ(arr.faces()[v.face].invalid_set, expect);
    }
    for (int s : seen)
        EXPECT_EQ(s, 1);
}

TEST_P(RandomArrangement, StatsInvariants)
{
    const auto s = stats(arr, &t);
    EXPECT_GE(s.k, s.m + 2);
    EXPECT_LE(s.d, s.m);
    EXPECT_EQ(2 * s.X, std::accumulate(s.x.begin(), s.x.end(), std::size_t{0}));
    EXPECT_EQ(s.e_dt, t.edges().size());
}

TEST_P(RandomArrangement, InsideHullFacesHaveDepth)
{
    for (const Face& f : arr.faces())
        if (f.inside_hull && f.resolved) {
            EXPECT_GE(f.depth, 1u);
            EXPECT_TRUE(strictly_inside_convex(t.hull_polygon(), f.hull_sample));
            EXPECT_EQ(arr.locate(f.hull_sample), f.id);
        }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomArrangement, ::testing::Range<std::uint64_t>(1, 21));

TEST(Stats, PerturbedGridDepthGrows)
{
    const auto pts = perturbed_grid(10, 1e-3, 5);
    const auto t = build_delaunay(pts);
    const auto s = stats(build_arrangement(t), &t);
    EXPECT_GE(s.d, 7u);
}

} // namespace
} // namespace steiner
