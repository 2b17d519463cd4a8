#ifndef STEINER_TRIANGULATION_HPP
#define STEINER_TRIANGULATION_HPP

#include "steiner/geometry.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace steiner {

using VertexId = std::size_t;
using TriangleId = std::size_t;

inline constexpr std::size_t no_index = static_cast<std::size_t>(-1);

/// Undirected edge with normalized endpoint order.
struct Edge
{
    VertexId a = 0;
    VertexId b = 0;

    Edge() = default;
    Edge(VertexId u, VertexId v) : a(std::min(u, v)), b(std::max(u, v)) {}
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Constraint segments given as pairs of vertex indices.
struct ConstraintSet
{
    std::vector<std::array<VertexId, 2>> segments;

    bool empty() const { return segments.empty(); }
};

/// Planar triangulation with counterclockwise triangles and adjacency.
/// neighbors(t)[i] is the triangle across the edge opposite vertex i, or
/// no_index on the hull.
class Triangulation
{
public:
    Triangulation() = default;

    /// Builds adjacency for a given triangle list. Triangles are reoriented
    /// counterclockwise; an edge shared by more than two triangles or a
    /// zero-area triangle is a structural error.
    static Triangulation from_triangles(std::vector<Point> vertices, std::vector<std::array<VertexId, 3>> triangles,
                                        std::set<Edge> constrained = {})
    {
        Triangulation t;
        t.vertices_ = std::move(vertices);
        t.triangles_ = std::move(triangles);
        t.constrained_ = std::move(constrained);
        t.neighbors_.assign(t.triangles_.size(), {no_index, no_index, no_index});
        std::map<std::pair<VertexId, VertexId>, std::pair<TriangleId, int>> directed;
        for (TriangleId i = 0; i < t.triangles_.size(); ++i) {
            auto& tri = t.triangles_[i];
            const Sign o = orient(t.vertices_[tri[0]], t.vertices_[tri[1]], t.vertices_[tri[2]]);
            if (o == Sign::zero)
                throw structural_error("triangulation: zero-area triangle");
            if (o == Sign::negative)
                std::swap(tri[1], tri[2]);
            for (int k = 0; k < 3; ++k) {
                const auto key = std::make_pair(tri[(k + 1) % 3], tri[(k + 2) % 3]);
                if (!directed.emplace(key, std::make_pair(i, k)).second)
                    throw structural_error("triangulation: edge used twice in one direction");
            }
        }
        for (const auto& [key, val] : directed) {
            auto it = directed.find({key.second, key.first});
            if (it != directed.end())
                t.neighbors_[val.first][val.second] = it->second.first;
        }
        t.compute_hull();
        return t;
    }

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<std::array<VertexId, 3>>& triangles() const { return triangles_; }
    const std::array<TriangleId, 3>& neighbors(TriangleId t) const { return neighbors_[t]; }
    const std::set<Edge>& constrained_edges() const { return constrained_; }
    bool is_constrained(VertexId u, VertexId v) const { return constrained_.count(Edge(u, v)) != 0; }
    std::size_t size() const { return triangles_.size(); }
    bool empty() const { return triangles_.empty(); }

    /// Counterclockwise cycle of hull vertices (every boundary vertex,
    /// including any collinear ones).
    const std::vector<VertexId>& hull() const { return hull_; }
    std::vector<Point> hull_polygon() const
    {
        std::vector<Point> out;
        for (VertexId v : hull_)
            out.push_back(vertices_[v]);
        return out;
    }

    std::array<Point, 3> corners(TriangleId t) const
    {
        const auto& tri = triangles_[t];
        return {vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]};
    }

    std::set<Edge> edges() const
    {
        std::set<Edge> out;
        for (const auto& tri : triangles_)
            for (int k = 0; k < 3; ++k)
                out.emplace(tri[k], tri[(k + 1) % 3]);
        return out;
    }

    bool has_edge(VertexId u, VertexId v) const
    {
        for (const auto& tri : triangles_)
            for (int k = 0; k < 3; ++k)
                if (Edge(tri[k], tri[(k + 1) % 3]) == Edge(u, v))
                    return true;
        return false;
    }

private:
    void compute_hull()
    {
        hull_.clear();
        std::map<VertexId, VertexId> next;
        for (TriangleId i = 0; i < triangles_.size(); ++i)
            for (int k = 0; k < 3; ++k)
                if (neighbors_[i][k] == no_index)
                    next[triangles_[i][(k + 1) % 3]] = triangles_[i][(k + 2) % 3];
        if (next.empty())
            return;
        const VertexId start = next.begin()->first;
        VertexId v = start;
        do {
            hull_.push_back(v);
            auto it = next.find(v);
            if (it == next.end() || hull_.size() > next.size())
                throw structural_error("triangulation: boundary is not a single cycle");
            v = it->second;
        } while (v != start);
        if (hull_.size() != next.size())
            throw structural_error("triangulation: boundary is not a single cycle");
    }

    std::vector<Point> vertices_;
    std::vector<std::array<VertexId, 3>> triangles_;
    std::vector<std::array<TriangleId, 3>> neighbors_;
    std::set<Edge> constrained_;
    std::vector<VertexId> hull_;
};

/// Policy for cocircular (ambiguous) Delaunay configurations.
enum class Cocircular { reject, accept };

namespace detail {

/// Randomized incremental Bowyer-Watson builder with ghost triangles
/// incident to a symbolic vertex at infinity.
class DelaunayBuilder
{
public:
    struct Tri
    {
        std::array<VertexId, 3> v;
        std::array<std::size_t, 3> n;
        bool alive = true;
    };

    explicit DelaunayBuilder(std::vector<Point> pts) : pts_(std::move(pts)), ghost_(pts_.size()) {}

    /// Inserts all points in a seeded random order.
    void build(std::uint64_t seed)
    {
        std::vector<VertexId> order(pts_.size());
        std::iota(order.begin(), order.end(), VertexId{0});
        std::mt19937_64 rng(seed);
        std::shuffle(order.begin(), order.end(), rng);
        // Seed triangle: first two points and the first non-collinear third.
        std::size_t third = no_index;
        for (std::size_t j = 2; j < order.size(); ++j)
            if (orient(pts_[order[0]], pts_[order[1]], pts_[order[j]]) != Sign::zero) {
                third = j;
                break;
            }
        if (third == no_index)
            throw degeneracy_error("all points are collinear");
        std::swap(order[2], order[third]);
        init(order[0], order[1], order[2]);
        for (std::size_t j = 3; j < order.size(); ++j)
            insert(order[j]);
    }

    /// Appends a point and inserts it into the current triangulation.
    VertexId add_point(Point p)
    {
        // The ghost id equals the original point count; keep it fixed by
        // storing extra points after a placeholder slot.
        if (pts_.size() == ghost_)
            pts_.push_back(Point{});
        pts_.push_back(p);
        const VertexId id = pts_.size() - 1;
        insert(id);
        return id;
    }

    const std::vector<Point>& points() const { return pts_; }
    VertexId ghost() const { return ghost_; }
    const std::vector<Tri>& tris() const { return tris_; }
    bool is_ghost(const Tri& t) const { return t.v[0] == ghost_ || t.v[1] == ghost_ || t.v[2] == ghost_; }

    /// Finite triangles, counterclockwise.
    std::vector<std::array<VertexId, 3>> finite_triangles() const
    {
        std::vector<std::array<VertexId, 3>> out;
        for (const Tri& t : tris_)
            if (t.alive && !is_ghost(t))
                out.push_back(t.v);
        return out;
    }

    /// Vertex coordinates with the ghost slot removed; ids above the ghost
    /// shift down by one.
    std::vector<Point> real_points() const
    {
        std::vector<Point> out(pts_.begin(), pts_.begin() + static_cast<std::ptrdiff_t>(ghost_));
        if (pts_.size() > ghost_ + 1)
            out.insert(out.end(), pts_.begin() + static_cast<std::ptrdiff_t>(ghost_ + 1), pts_.end());
        return out;
    }
    VertexId real_id(VertexId v) const { return v > ghost_ ? v - 1 : v; }

private:
    bool conflicts(const Tri& t, Point p) const
    {
        for (int k = 0; k < 3; ++k)
            if (t.v[k] == ghost_) {
                const Point a = pts_[t.v[(k + 1) % 3]];
                const Point b = pts_[t.v[(k + 2) % 3]];
                const Sign o = orient(a, b, p);
                return o == Sign::positive || (o == Sign::zero && on_open_segment(a, b, p));
            }
        return in_disk_unchecked(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) == Sign::positive;
    }

    void init(VertexId a, VertexId b, VertexId c)
    {
        if (orient(pts_[a], pts_[b], pts_[c]) == Sign::negative)
            std::swap(b, c);
        tris_.clear();
        tris_.push_back({{a, b, c}, {no_index, no_index, no_index}});
        tris_.push_back({{b, a, ghost_}, {no_index, no_index, no_index}});
        tris_.push_back({{c, b, ghost_}, {no_index, no_index, no_index}});
        tris_.push_back({{a, c, ghost_}, {no_index, no_index, no_index}});
        std::map<std::pair<VertexId, VertexId>, std::pair<std::size_t, int>> directed;
        for (std::size_t i = 0; i < tris_.size(); ++i)
            for (int k = 0; k < 3; ++k)
                directed[{tris_[i].v[(k + 1) % 3], tris_[i].v[(k + 2) % 3]}] = {i, k};
        for (const auto& [key, val] : directed)
            tris_[val.first].n[val.second] = directed.at({key.second, key.first}).first;
        last_ = 0;
    }

    std::size_t locate(Point p)
    {
        std::size_t t = last_;
        if (!tris_[t].alive)
            t = first_alive();
        if (is_ghost(tris_[t]))
            for (int k = 0; k < 3; ++k)
                if (tris_[t].v[k] == ghost_) {
                    t = tris_[t].n[k];
                    break;
                }
        const std::size_t limit = 4 * tris_.size() + 16;
        for (std::size_t step = 0; step < limit; ++step) {
            const Tri& tri = tris_[t];
            if (is_ghost(tri))
                return conflicts(tri, p) ? t : scan(p);
            bool moved = false;
            for (int j = 0; j < 3; ++j) {
                const int k = static_cast<int>((step + static_cast<std::size_t>(j)) % 3);
                const Point a = pts_[tri.v[(k + 1) % 3]];
                const Point b = pts_[tri.v[(k + 2) % 3]];
                if (orient(a, b, p) == Sign::negative) {
                    t = tri.n[k];
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                for (VertexId v : tri.v)
                    if (pts_[v] == p)
                        throw degeneracy_error("duplicate point");
                return t;
            }
        }
        return scan(p);
    }

    std::size_t first_alive() const
    {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive)
                return i;
        throw structural_error("triangulation builder: no live triangle");
    }

    std::size_t scan(Point p) const
    {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive && conflicts(tris_[i], p))
                return i;
        throw structural_error("triangulation builder: point location failed");
    }

    void insert(VertexId id)
    {
        const Point p = pts_[id];
        const std::size_t start = locate(p);
        std::vector<std::size_t> cavity{start};
        std::vector<char> in(tris_.size(), 0);
        in[start] = 1;
        for (std::size_t i = 0; i < cavity.size(); ++i)
            for (std::size_t nb : tris_[cavity[i]].n)
                if (!in[nb] && conflicts(tris_[nb], p)) {
                    in[nb] = 1;
                    cavity.push_back(nb);
                }
        for (std::size_t c : cavity)
            for (VertexId v : tris_[c].v)
                if (v != ghost_ && pts_[v] == p)
                    throw degeneracy_error("duplicate point");

        struct Boundary
        {
            VertexId u, w;
            std::size_t outside;
        };
        std::vector<Boundary> boundary;
        for (std::size_t c : cavity)
            for (int k = 0; k < 3; ++k) {
                const std::size_t nb = tris_[c].n[k];
                if (!in[nb])
                    boundary.push_back({tris_[c].v[(k + 1) % 3], tris_[c].v[(k + 2) % 3], nb});
            }
        for (std::size_t c : cavity) {
            tris_[c].alive = false;
            free_.push_back(c);
        }
        std::map<VertexId, std::size_t> by_first;
        std::vector<std::size_t> created;
        for (const Boundary& b : boundary) {
            std::size_t slot;
            if (!free_.empty()) {
                slot = free_.back();
                free_.pop_back();
                tris_[slot] = Tri{{b.u, b.w, id}, {no_index, no_index, b.outside}, true};
            } else {
                slot = tris_.size();
                tris_.push_back(Tri{{b.u, b.w, id}, {no_index, no_index, b.outside}, true});
            }
            Tri& out = tris_[b.outside];
            for (int k = 0; k < 3; ++k)
                if (out.v[(k + 1) % 3] == b.w && out.v[(k + 2) % 3] == b.u)
                    out.n[k] = slot;
            if (!by_first.emplace(b.u, slot).second)
                throw structural_error("triangulation builder: cavity is not star-shaped");
            created.push_back(slot);
        }
        for (std::size_t s : created) {
            Tri& t = tris_[s];
            auto across_wp = by_first.find(t.v[1]);
            if (across_wp == by_first.end())
                throw structural_error("triangulation builder: open cavity boundary");
            t.n[0] = across_wp->second;
            tris_[across_wp->second].n[1] = s;
        }
        last_ = created.front();
    }

    std::vector<Point> pts_;
    VertexId ghost_;
    std::vector<Tri> tris_;
    std::vector<std::size_t> free_;
    std::size_t last_ = 0;
};

/// Edge-flip mesh used for constraint recovery and Lawson flipping.
class FlipMesh
{
public:
    FlipMesh(std::vector<Point> pts, std::vector<std::array<VertexId, 3>> tris)
        : pts_(std::move(pts)), tris_(std::move(tris))
    {
        for (std::size_t i = 0; i < tris_.size(); ++i)
            for (int k = 0; k < 3; ++k)
                attach(Edge(tris_[i][k], tris_[i][(k + 1) % 3]), i);
    }

    const std::vector<Point>& points() const { return pts_; }
    const std::vector<std::array<VertexId, 3>>& tris() const { return tris_; }
    std::set<Edge>& constrained() { return constrained_; }
    bool has_edge(Edge e) const { return edges_.count(e) != 0; }

    std::vector<Edge> all_edges() const
    {
        std::vector<Edge> out;
        for (const auto& [e, t] : edges_)
            out.push_back(e);
        return out;
    }

    bool interior(Edge e) const
    {
        auto it = edges_.find(e);
        return it != edges_.end() && it->second[1] != no_index;
    }

    /// (a, b, c, d): t1 = (a, b, c) ccw and t2 = (b, a, d) ccw.
    std::array<VertexId, 4> quad(Edge e) const
    {
        const auto& ts = edges_.at(e);
        const auto& t1 = tris_[ts[0]];
        VertexId a = e.a, b = e.b;
        int k = 0;
        while (!(t1[k] == a && t1[(k + 1) % 3] == b) && !(t1[k] == b && t1[(k + 1) % 3] == a))
            ++k;
        a = t1[k];
        b = t1[(k + 1) % 3];
        const VertexId c = t1[(k + 2) % 3];
        const auto& t2 = tris_[ts[1]];
        VertexId d = t2[0];
        for (VertexId v : t2)
            if (v != a && v != b)
                d = v;
        return {a, b, c, d};
    }

    bool flippable(Edge e) const
    {
        if (!interior(e))
            return false;
        const auto [a, b, c, d] = quad(e);
        const Sign oa = orient(pts_[c], pts_[d], pts_[a]);
        const Sign ob = orient(pts_[c], pts_[d], pts_[b]);
        return oa != Sign::zero && ob != Sign::zero && oa != ob;
    }

    /// Sign of d against the circumcircle of (a, b, c).
    Sign incircle(Edge e) const
    {
        const auto [a, b, c, d] = quad(e);
        return in_disk_unchecked(pts_[a], pts_[b], pts_[c], pts_[d]);
    }

    Edge flip(Edge e)
    {
        const auto [a, b, c, d] = quad(e);
        // quad() reads (a, b, c) from the first incident triangle.
        const auto ts = edges_.at(e);
        const std::size_t t1 = ts[0], t2 = ts[1];
        edges_.erase(e);
        detach(Edge(b, c), t1);
        detach(Edge(a, d), t2);
        tris_[t1] = {a, d, c};
        tris_[t2] = {d, b, c};
        attach(Edge(a, d), t1);
        attach(Edge(b, c), t2);
        attach(Edge(c, d), t1);
        attach(Edge(c, d), t2);
        return Edge(c, d);
    }

    /// Restores the (constrained) Delaunay property by Lawson flips.
    void lawson()
    {
        std::deque<Edge> queue;
        for (const auto& [e, t] : edges_)
            queue.push_back(e);
        while (!queue.empty()) {
            const Edge e = queue.front();
            queue.pop_front();
            if (!interior(e) || constrained_.count(e))
                continue;
            if (incircle(e) != Sign::positive)
                continue;
            const auto [a, b, c, d] = quad(e);
            flip(e);
            queue.emplace_back(a, c);
            queue.emplace_back(c, b);
            queue.emplace_back(b, d);
            queue.emplace_back(d, a);
        }
    }

    /// Forces segment (u, v) into the mesh by flipping crossing edges.
    void insert_constraint(VertexId u, VertexId v)
    {
        const Edge target(u, v);
        if (!has_edge(target)) {
            const Point pu = pts_[u], pv = pts_[v];
            auto crosses = [&](Edge e) {
                if (e.a == u || e.a == v || e.b == u || e.b == v)
                    return false;
                const Point a = pts_[e.a], b = pts_[e.b];
                const Sign o1 = orient(pu, pv, a), o2 = orient(pu, pv, b);
                const Sign o3 = orient(a, b, pu), o4 = orient(a, b, pv);
                return o1 != Sign::zero && o2 != Sign::zero && o1 != o2 && o3 != Sign::zero &&
                       o4 != Sign::zero && o3 != o4;
            };
            std::deque<Edge> queue;
            for (const auto& [e, t] : edges_)
                if (crosses(e)) {
                    if (constrained_.count(e))
                        throw precondition_error("constraint segments cross");
                    queue.push_back(e);
                }
            std::size_t guard = 0;
            const std::size_t limit = 64 * (queue.size() + 1) * (queue.size() + 1) + 1024;
            while (!queue.empty()) {
                if (++guard > limit)
                    throw structural_error("constraint recovery did not converge");
                const Edge e = queue.front();
                queue.pop_front();
                if (!has_edge(e))
                    continue;
                if (!flippable(e)) {
                    queue.push_back(e);
                    continue;
                }
                const Edge made = flip(e);
                if (crosses(made))
                    queue.push_back(made);
            }
            if (!has_edge(target))
                throw structural_error("constraint recovery failed");
        }
        constrained_.insert(target);
    }

    /// For cocircular quads, keeps whichever diagonal gives the larger
    /// minimum angle over its two triangles.
    void resolve_cocircular()
    {
        std::set<std::size_t> touched;
        for (const Edge e : all_edges()) {
            if (!interior(e) || constrained_.count(e) || !flippable(e))
                continue;
            const auto ts = edges_.at(e);
            if (touched.count(ts[0]) || touched.count(ts[1]))
                continue;
            if (incircle(e) != Sign::zero)
                continue;
            const auto [a, b, c, d] = quad(e);
            const double before = std::min(tri_min_angle(a, b, c), tri_min_angle(b, a, d));
            const double after = std::min(tri_min_angle(a, d, c), tri_min_angle(d, b, c));
            touched.insert(ts[0]);
            touched.insert(ts[1]);
            if (after > before)
                flip(e);
        }
    }

    bool has_cocircular_ambiguity() const
    {
        for (const auto& [e, ts] : edges_)
            if (ts[1] != no_index && !constrained_.count(e) && incircle(e) == Sign::zero)
                return true;
        return false;
    }

    double tri_min_angle(VertexId a, VertexId b, VertexId c) const
    {
        const Point pa = pts_[a], pb = pts_[b], pc = pts_[c];
        return std::min({angle_between(pa, pb, pc), angle_between(pb, pc, pa), angle_between(pc, pa, pb)});
    }

private:
    void attach(Edge e, std::size_t t)
    {
        auto [it, fresh] = edges_.try_emplace(e, std::array<std::size_t, 2>{t, no_index});
        if (!fresh) {
            if (it->second[1] != no_index)
                throw structural_error("flip mesh: non-manifold edge");
            it->second[1] = t;
        }
    }

    void detach(Edge e, std::size_t t)
    {
        auto it = edges_.find(e);
        auto& ts = it->second;
        if (ts[0] == t) {
            ts[0] = ts[1];
            ts[1] = no_index;
        } else if (ts[1] == t) {
            ts[1] = no_index;
        }
        if (ts[0] == no_index)
            edges_.erase(it);
    }

    std::vector<Point> pts_;
    std::vector<std::array<VertexId, 3>> tris_;
    std::map<Edge, std::array<std::size_t, 2>> edges_;
    std::set<Edge> constrained_;
};

inline void check_distinct(const std::vector<Point>& points)
{
    std::vector<Point> sorted = points;
    std::sort(sorted.begin(), sorted.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1])
            throw degeneracy_error("duplicate point");
    for (Point p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw precondition_error("non-finite coordinate");
}

inline void validate_constraints(const std::vector<Point>& points, const ConstraintSet& constraints)
{
    std::set<Edge> seen;
    for (const auto& s : constraints.segments) {
        if (s[0] >= points.size() || s[1] >= points.size())
            throw precondition_error("constraint endpoint is not an input point");
        if (s[0] == s[1])
            throw precondition_error("constraint segment has identical endpoints");
        if (!seen.emplace(s[0], s[1]).second)
            throw precondition_error("duplicate constraint segment");
        for (std::size_t v = 0; v < points.size(); ++v)
            if (v != s[0] && v != s[1] && on_open_segment(points[s[0]], points[s[1]], points[v]))
                throw precondition_error("constraint segment passes through an input point");
    }
    const auto& segs = constraints.segments;
    for (std::size_t i = 0; i < segs.size(); ++i)
        for (std::size_t j = i + 1; j < segs.size(); ++j)
            if (segments_conflict(points[segs[i][0]], points[segs[i][1]], points[segs[j][0]], points[segs[j][1]]))
                throw precondition_error("constraint segments cross");
}

inline constexpr std::uint64_t default_seed = 0x5eed5eedULL;

inline FlipMesh build_flip_mesh(const std::vector<Point>& points, const ConstraintSet& constraints,
                                std::uint64_t seed)
{
    DelaunayBuilder builder(points);
    builder.build(seed);
    FlipMesh mesh(points, builder.finite_triangles());
    for (const auto& s : constraints.segments)
        mesh.insert_constraint(s[0], s[1]);
    if (!constraints.empty())
        mesh.lawson();
    return mesh;
}

} // namespace detail

/// Delaunay triangulation by randomized incremental insertion. Rejects
/// fewer than three points, duplicates, all-collinear input, and (unless
/// policy is accept) cocircular configurations that make it ambiguous.
inline Triangulation build_delaunay(const std::vector<Point>& points, Cocircular policy = Cocircular::reject,
                                   std::uint64_t seed = detail::default_seed)
{
    if (points.size() < 3)
        throw precondition_error("build_delaunay: need at least three points");
    detail::check_distinct(points);
    detail::DelaunayBuilder builder(points);
    builder.build(seed);
    auto tris = builder.finite_triangles();
    if (policy == Cocircular::reject) {
        detail::FlipMesh mesh(points, tris);
        if (mesh.has_cocircular_ambiguity())
            throw degeneracy_error("build_delaunay: four cocircular points make the triangulation ambiguous");
    }
    return Triangulation::from_triangles(points, std::move(tris));
}

/// Constrained Delaunay triangulation: Delaunay build, constraint recovery
/// by edge flips, then Lawson flips on unconstrained edges.
inline Triangulation build_cdt(const std::vector<Point>& points, const ConstraintSet& constraints,
                               Cocircular policy = Cocircular::reject, std::uint64_t seed = detail::default_seed)
{
    if (points.size() < 3)
        throw precondition_error("build_cdt: need at least three points");
    detail::check_distinct(points);
    detail::validate_constraints(points, constraints);
    detail::FlipMesh mesh = detail::build_flip_mesh(points, constraints, seed);
    if (policy == Cocircular::reject && mesh.has_cocircular_ambiguity())
        throw degeneracy_error("build_cdt: four cocircular points make the triangulation ambiguous");
    return Triangulation::from_triangles(points, mesh.tris(), mesh.constrained());
}

inline double triangle_min_angle(const Triangulation& t, TriangleId i)
{
    const auto [a, b, c] = t.corners(i);
    return std::min({angle_between(a, b, c), angle_between(b, c, a), angle_between(c, a, b)});
}

/// Smallest of the 3 * size() angles.
inline double min_angle(const Triangulation& t)
{
    if (t.empty())
        throw precondition_error("min_angle: empty triangulation");
    double m = std::numbers::pi;
    for (TriangleId i = 0; i < t.size(); ++i)
        m = std::min(m, triangle_min_angle(t, i));
    return m;
}

struct DelaunayCircle
{
    Circle circle;
    TriangleId triangle = 0;
};

/// One circumcircle per triangle; entry i belongs to triangle i.
inline std::vector<DelaunayCircle> delaunay_circles(const Triangulation& t)
{
    std::vector<DelaunayCircle> out;
    out.reserve(t.size());
    for (TriangleId i = 0; i < t.size(); ++i) {
        const auto [a, b, c] = t.corners(i);
        out.push_back({circumcircle(a, b, c), i});
    }
    return out;
}

namespace detail {

inline void check_insertion_point(const std::vector<Point>& points, const ConstraintSet& constraints,
                                  const std::vector<Point>& hull, Point p)
{
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw precondition_error("insertion point is not finite");
    for (Point q : points)
        if (q == p)
            throw precondition_error("insertion point coincides with an input point");
    if (!strictly_inside_convex(hull, p))
        throw precondition_error("insertion point is not strictly inside the convex hull");
    for (const auto& s : constraints.segments)
        if (on_open_segment(points[s[0]], points[s[1]], p))
            throw precondition_error("insertion point lies on a constraint segment");
}

inline std::vector<Point> hull_of(const std::vector<Point>& points)
{
    std::vector<Point> out;
    for (std::size_t i : convex_hull_indices(points))
        out.push_back(points[i]);
    return out;
}

} // namespace detail

/// Minimum angle of the (constrained) Delaunay triangulation of
/// points + {p}, rebuilt from scratch. When p makes a quad cocircular, the
/// completion with the larger minimum angle is used.
inline double evaluate_insertion(const std::vector<Point>& points, const ConstraintSet& constraints, Point p)
{
    detail::check_insertion_point(points, constraints, detail::hull_of(points), p);
    std::vector<Point> all = points;
    all.push_back(p);
    detail::FlipMesh mesh = detail::build_flip_mesh(all, constraints, detail::default_seed);
    mesh.resolve_cocircular();
    double m = std::numbers::pi;
    for (const auto& tri : mesh.tris())
        m = std::min(m, mesh.tri_min_angle(tri[0], tri[1], tri[2]));
    return m;
}

/// Repeated unconstrained insertion queries against one point set: the
/// base triangulation is built once and each query inserts p into a copy.
class InsertionEvaluator
{
public:
    explicit InsertionEvaluator(std::vector<Point> points, std::uint64_t seed = detail::default_seed)
        : points_(std::move(points)), hull_(detail::hull_of(points_)), base_(points_)
    {
        detail::check_distinct(points_);
        base_.build(seed);
    }

    const std::vector<Point>& points() const { return points_; }
    const std::vector<Point>& hull() const { return hull_; }

    double operator()(Point p) const
    {
        detail::check_insertion_point(points_, {}, hull_, p);
        detail::DelaunayBuilder b = base_;
        const VertexId id = b.add_point(p);
        const auto& pts = b.points();
        double m = std::numbers::pi;
        bool ambiguous = false;
        for (const auto& t : b.tris()) {
            if (!t.alive || b.is_ghost(t))
                continue;
            const Point pa = pts[t.v[0]], pb = pts[t.v[1]], pc = pts[t.v[2]];
            m = std::min({m, angle_between(pa, pb, pc), angle_between(pb, pc, pa), angle_between(pc, pa, pb)});
            if (t.v[0] != id && t.v[1] != id && t.v[2] != id)
                continue;
            for (int k = 0; k < 3 && !ambiguous; ++k) {
                const auto& nb = b.tris()[t.n[k]];
                if (b.is_ghost(nb))
                    continue;
                VertexId opp = nb.v[0];
                for (VertexId v : nb.v)
                    if (v != t.v[(k + 1) % 3] && v != t.v[(k + 2) % 3])
                        opp = v;
                ambiguous = in_disk_unchecked(pa, pb, pc, pts[opp]) == Sign::zero;
            }
        }
        if (!ambiguous)
            return m;
        std::vector<std::array<VertexId, 3>> tris;
        for (auto tri : b.finite_triangles()) {
            for (auto& v : tri)
                v = b.real_id(v);
            tris.push_back(tri);
        }
        detail::FlipMesh mesh(b.real_points(), std::move(tris));
        mesh.resolve_cocircular();
        m = std::numbers::pi;
        for (const auto& tri : mesh.tris())
            m = std::min(m, mesh.tri_min_angle(tri[0], tri[1], tri[2]));
        return m;
    }

private:
    std::vector<Point> points_;
    std::vector<Point> hull_;
    detail::DelaunayBuilder base_;
};

} // namespace steiner

#endif // STEINER_TRIANGULATION_HPP
