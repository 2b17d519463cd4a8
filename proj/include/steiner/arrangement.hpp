#ifndef STEINER_ARRANGEMENT_HPP
#define STEINER_ARRANGEMENT_HPP

#include "steiner/errors.hpp"
#include "steiner/geometry.hpp"
#include "steiner/triangulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

namespace steiner {

enum class CurveKind { circle, segment };

/// A circle or segment of the arrangement. Anchors are indices of input
/// points known to lie exactly on the curve; intersections at shared
/// anchors are taken exactly instead of being computed.
struct Curve
{
    CurveKind kind = CurveKind::circle;
    Circle circle{};
    Segment segment{};
    std::vector<std::size_t> anchors;
};

struct ArrVertex
{
    Point p;
    std::size_t anchor = no_index;
    // Placed on a circle that meets no other curve; not counted in stats.
    bool artificial = false;
    // Outgoing half-edges in counterclockwise order.
    std::vector<std::size_t> out;
};

/// Piece of a curve between consecutive vertices. Circles are parametrized
/// by angle (hi may exceed 2*pi when the piece wraps), segments by t in
/// [0, 1]. Half-edge 2e runs forward (counterclockwise / a to b), 2e+1 back.
struct ArrEdge
{
    std::size_t curve;
    std::size_t from;
    std::size_t to;
    double lo;
    double hi;
};

struct FaceCycle
{
    std::vector<std::size_t> half_edges;
    double area = 0;
    std::size_t face = no_index;
};

struct Face
{
    std::size_t id = 0;
    // Outer boundary first for bounded faces, then hole boundaries.
    std::vector<std::size_t> cycles;
    bool bounded = false;
    std::size_t depth = 0;
    // Circles whose open disk contains the face. With circles built from a
    // triangulation this is the set of invalidated triangle ids.
    std::vector<std::size_t> invalid_set;
    bool inside_hull = false;
    Point sample{};
    // Interior point of face and hull; valid when inside_hull.
    Point hull_sample{};
    // The sample lies in the face, clear of every curve. False for faces too
    // thin to resolve in floating point.
    bool resolved = false;
};

struct FaceVisit
{
    std::size_t face;
    std::size_t parent = no_index;
    std::size_t via = no_index;
    std::size_t added = no_index;
    std::size_t removed = no_index;
};

struct ArrangementStats
{
    std::size_t v = 0, e = 0, f = 0;
    std::size_t k = 0;
    std::size_t d = 0;
    // Largest depth among faces that meet the hull interior.
    std::size_t d_hull = 0;
    double d_bar = 0;
    std::size_t m = 0;
    std::size_t X = 0;
    std::vector<std::size_t> x;
    std::vector<std::size_t> d_i;
    std::size_t u = 0;
    std::size_t e_dt = 0;
};

class Arrangement;

namespace detail {
inline Arrangement build_arrangement_impl(std::vector<Curve> curves, const std::vector<Point>& points,
                                          const std::vector<Point>& hull);
}

class Arrangement
{
public:
    const std::vector<Curve>& curves() const { return curves_; }
    const std::vector<ArrVertex>& vertices() const { return vertices_; }
    const std::vector<ArrEdge>& edges() const { return edges_; }
    const std::vector<Face>& faces() const { return faces_; }
    const std::vector<FaceCycle>& cycles() const { return cycles_; }
    const std::vector<FaceVisit>& traversal() const { return traversal_; }
    const std::vector<Point>& hull() const { return hull_; }
    double scale() const { return scale_; }

    std::size_t num_circles() const { return num_circles_; }
    std::size_t num_half_edges() const { return 2 * edges_.size(); }
    /// Edge ids of a curve, ordered by parameter.
    const std::vector<std::size_t>& curve_edges(std::size_t c) const { return curve_edges_[c]; }

    static std::size_t twin(std::size_t h) { return h ^ 1u; }
    static bool forward(std::size_t h) { return (h & 1u) == 0; }
    static std::size_t edge_of(std::size_t h) { return h >> 1; }
    std::size_t origin(std::size_t h) const { return forward(h) ? edges_[h >> 1].from : edges_[h >> 1].to; }
    std::size_t target(std::size_t h) const { return origin(twin(h)); }
    std::size_t next(std::size_t h) const { return next_[h]; }
    std::size_t face_of(std::size_t h) const { return face_of_[h]; }
    std::size_t curve_of(std::size_t h) const { return edges_[h >> 1].curve; }

    Point point_at(std::size_t edge, double param) const
    {
        const Curve& c = curves_[edges_[edge].curve];
        if (c.kind == CurveKind::circle)
            return c.circle.at(param);
        return c.segment.a + (c.segment.b - c.segment.a) * param;
    }

    /// Unit normal pointing into the face on the left of h, at a parameter
    /// of its edge.
    Point left_normal(std::size_t h, double param) const
    {
        const Curve& c = curves_[curve_of(h)];
        Point n;
        if (c.kind == CurveKind::circle)
            n = Point{-std::cos(param), -std::sin(param)};
        else {
            const Point d = c.segment.b - c.segment.a;
            n = perp(d) / norm(d);
        }
        return forward(h) ? n : -n;
    }

    /// Twice-pi-normalized winding number of the closed cycle around q.
    int winding(std::size_t cycle, Point q) const
    {
        double total = 0;
        for (std::size_t h : cycles_[cycle].half_edges)
            total += winding_contribution(h, q);
        return static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
    }

    bool point_in_face(std::size_t f, Point q) const
    {
        const Face& face = faces_[f];
        std::size_t first_hole = 0;
        if (face.bounded) {
            if (winding(face.cycles[0], q) != 1)
                return false;
            first_hole = 1;
        }
        for (std::size_t i = first_hole; i < face.cycles.size(); ++i)
            if (winding(face.cycles[i], q) != 0)
                return false;
        return true;
    }

    /// Distance from q to the nearest curve.
    double clearance(Point q) const
    {
        double best = std::numeric_limits<double>::infinity();
        for (const Curve& c : curves_) {
            if (c.kind == CurveKind::circle)
                best = std::min(best, std::abs(distance(q, c.circle.center) - c.circle.radius));
            else
                best = std::min(best, segment_distance(c.segment, q));
        }
        return best;
    }

    /// Face containing q. Points on a curve are ambiguous and rejected.
    std::size_t locate(Point q) const
    {
        if (clearance(q) <= merge_eps * scale_)
            throw degeneracy_error("locate: point lies on an arrangement curve");
        std::size_t best = 0;
        double best_area = std::numeric_limits<double>::infinity();
        for (const Face& f : faces_) {
            if (!f.bounded)
                continue;
            const FaceCycle& outer = cycles_[f.cycles[0]];
            if (outer.area < best_area && winding(f.cycles[0], q) == 1) {
                best = f.id;
                best_area = outer.area;
            }
        }
        return best;
    }

    /// Face left of the forward half-edge (inside, for circles) and right of it.
    std::size_t inner_face(std::size_t edge) const { return face_of_[2 * edge]; }
    std::size_t outer_face(std::size_t edge) const { return face_of_[2 * edge + 1]; }

private:
    friend Arrangement detail::build_arrangement_impl(std::vector<Curve>, const std::vector<Point>&,
                                                      const std::vector<Point>&);

    static double segment_distance(const Segment& s, Point q)
    {
        const Point d = s.b - s.a;
        const double t = std::clamp(dot(q - s.a, d) / dot(d, d), 0.0, 1.0);
        return distance(q, s.a + d * t);
    }

    double winding_contribution(std::size_t h, Point q) const
    {
        const ArrEdge& e = edges_[h >> 1];
        const Curve& c = curves_[e.curve];
        const Point p0 = point_at(h >> 1, e.lo), p1 = point_at(h >> 1, e.hi);
        const double chord = std::atan2(cross(p0 - q, p1 - q), dot(p0 - q, p1 - q));
        double w = chord;
        if (c.kind == CurveKind::circle && distance(q, c.circle.center) < c.circle.radius) {
            const bool loop = e.hi - e.lo >= 2 * std::numbers::pi - 1e-15;
            if (loop)
                w = 2 * std::numbers::pi;
            else {
                // Seen from inside, the angle grows monotonically along the arc.
                w = std::atan2(p1.y - q.y, p1.x - q.x) - std::atan2(p0.y - q.y, p0.x - q.x);
                w = std::fmod(w + 4 * std::numbers::pi, 2 * std::numbers::pi);
            }
        }
        return forward(h) ? w : -w;
    }

    std::vector<Curve> curves_;
    std::size_t num_circles_ = 0;
    std::vector<ArrVertex> vertices_;
    std::vector<ArrEdge> edges_;
    std::vector<std::vector<std::size_t>> curve_edges_;
    std::vector<std::size_t> next_;
    std::vector<std::size_t> face_of_;
    std::vector<FaceCycle> cycles_;
    std::vector<Face> faces_;
    std::vector<FaceVisit> traversal_;
    std::vector<Point> hull_;
    double scale_ = 1;
};

namespace detail {

inline double curve_scale(const std::vector<Curve>& curves)
{
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x;
    double hi_x = -lo_x, hi_y = -lo_x;
    auto add = [&](Point p) {
        lo_x = std::min(lo_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_x = std::max(hi_x, p.x);
        hi_y = std::max(hi_y, p.y);
    };
    for (const Curve& c : curves) {
        if (c.kind == CurveKind::circle) {
            add(c.circle.center - Point{c.circle.radius, c.circle.radius});
            add(c.circle.center + Point{c.circle.radius, c.circle.radius});
        } else {
            add(c.segment.a);
            add(c.segment.b);
        }
    }
    return std::max({hi_x - lo_x, hi_y - lo_y, std::numeric_limits<double>::min()});
}

inline double circle_param(const Circle& c, Point p) { return c.theta_of(p); }

inline double segment_param(const Segment& s, Point p)
{
    const Point d = s.b - s.a;
    return dot(p - s.a, d) / dot(d, d);
}

inline std::vector<std::size_t> shared_anchors(const Curve& a, const Curve& b)
{
    std::vector<std::size_t> out;
    for (std::size_t x : a.anchors)
        if (std::find(b.anchors.begin(), b.anchors.end(), x) != b.anchors.end())
            out.push_back(x);
    return out;
}

/// Roots t of |a + t d - c|^2 = r^2.
inline std::vector<double> line_circle_params(Point a, Point d, const Circle& c)
{
    const Point w = a - c.center;
    const double A = dot(d, d), B = 2 * dot(w, d), C = dot(w, w) - c.radius * c.radius;
    const double disc = B * B - 4 * A * C;
    if (disc < 0)
        return {};
    const double s = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double q = -0.5 * (B + std::copysign(s, B));
    std::vector<double> out;
    if (q != 0) {
        out.push_back(q / A);
        out.push_back(C / q);
    } else {
        out.push_back(0.0);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline double half_edge_area(const Arrangement& arr, std::size_t h)
{
    const ArrEdge& e = arr.edges()[Arrangement::edge_of(h)];
    const Curve& c = arr.curves()[e.curve];
    const Point p0 = arr.point_at(Arrangement::edge_of(h), e.lo);
    const Point p1 = arr.point_at(Arrangement::edge_of(h), e.hi);
    double a = 0.5 * cross(p0, p1);
    if (c.kind == CurveKind::circle) {
        const double phi = e.hi - e.lo;
        a += 0.5 * c.circle.radius * c.circle.radius * (phi - std::sin(phi));
    }
    return Arrangement::forward(h) ? a : -a;
}

struct Builder
{
    std::vector<Curve>& curves;
    const std::vector<Point>& points;
    std::vector<ArrVertex> vertices;
    std::map<std::size_t, std::size_t> anchor_vertex;
    std::vector<std::vector<std::pair<double, std::size_t>>> events;
    double tol;

    std::size_t anchored(std::size_t a)
    {
        auto it = anchor_vertex.find(a);
        if (it != anchor_vertex.end())
            return it->second;
        vertices.push_back({points[a], a, false, {}});
        anchor_vertex.emplace(a, vertices.size() - 1);
        return vertices.size() - 1;
    }

    std::size_t free_vertex(Point p)
    {
        vertices.push_back({p, no_index, false, {}});
        return vertices.size() - 1;
    }

    double param(std::size_t c, Point p) const
    {
        const Curve& cv = curves[c];
        return cv.kind == CurveKind::circle ? circle_param(cv.circle, p) : segment_param(cv.segment, p);
    }

    void on(std::size_t c, std::size_t v, std::optional<double> t = std::nullopt)
    {
        for (const auto& ev : events[c])
            if (ev.second == v)
                return;
        events[c].emplace_back(t ? *t : param(c, vertices[v].p), v);
    }

    void circle_circle(std::size_t i, std::size_t j)
    {
        const Circle& a = curves[i].circle;
        const Circle& b = curves[j].circle;
        const double dc = distance(a.center, b.center);
        if (dc > a.radius + b.radius + tol || dc < std::abs(a.radius - b.radius) - tol)
            return;
        if (dc <= tol && std::abs(a.radius - b.radius) <= tol)
            throw precondition_error("build_arrangement: duplicate circles");
        const auto shared = shared_anchors(curves[i], curves[j]);
        if (shared.size() >= 3)
            throw precondition_error("build_arrangement: duplicate circles");
        if (shared.size() == 2) {
            for (std::size_t s : shared) {
                const std::size_t v = anchored(s);
                on(i, v);
                on(j, v);
            }
            return;
        }
        if (shared.size() == 1) {
            const std::size_t v = anchored(shared[0]);
            on(i, v);
            on(j, v);
            const Point p = points[shared[0]];
            const Point d = b.center - a.center;
            const Point foot = a.center + d * (dot(p - a.center, d) / dot(d, d));
            const Point mirror = foot * 2.0 - p;
            if (distance(mirror, p) > tol) {
                const std::size_t w = free_vertex(mirror);
                on(i, w);
                on(j, w);
            }
            return;
        }
        for (Point p : circle_intersections(a, b)) {
            const std::size_t w = free_vertex(p);
            on(i, w);
            on(j, w);
        }
    }

    void circle_segment(std::size_t i, std::size_t j)
    {
        const Circle& c = curves[i].circle;
        const Segment& s = curves[j].segment;
        const Point d = s.b - s.a;
        const auto shared = shared_anchors(curves[i], curves[j]);
        std::vector<double> ts;
        for (std::size_t a : shared) {
            const std::size_t v = anchored(a);
            on(i, v);
            on(j, v, points[a] == s.a ? 0.0 : 1.0);
        }
        if (shared.size() == 2)
            return;
        if (shared.size() == 1) {
            const bool at_a = points[shared[0]] == s.a;
            const Point base = at_a ? s.a : s.b;
            const Point dir = at_a ? d : -d;
            const double t2 = -2 * dot(base - c.center, dir) / dot(dir, dir);
            if (t2 > 0 && t2 < 1)
                ts.push_back(at_a ? t2 : 1 - t2);
        } else {
            for (double t : line_circle_params(s.a, d, c))
                if (t > 0 && t < 1)
                    ts.push_back(t);
        }
        for (double t : ts) {
            const std::size_t w = free_vertex(s.a + d * t);
            on(i, w);
            on(j, w, t);
        }
    }

    void segment_segment(std::size_t i, std::size_t j)
    {
        const Segment& a = curves[i].segment;
        const Segment& b = curves[j].segment;
        if (segments_conflict(a.a, a.b, b.a, b.b))
            throw precondition_error("build_arrangement: segments cross");
    }

    void check_collisions() const
    {
        std::vector<std::size_t> order(vertices.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vertices[a].p.x < vertices[b].p.x; });
        for (std::size_t i = 0; i < order.size(); ++i)
            for (std::size_t j = i + 1; j < order.size(); ++j) {
                const Point p = vertices[order[i]].p, q = vertices[order[j]].p;
                if (q.x - p.x > tol)
                    break;
                if (distance(p, q) <= tol)
                    throw degeneracy_error("build_arrangement: arrangement vertices coincide within tolerance");
            }
    }
};

/// Positive t at which the ray o + t n first meets a curve other than the
/// edge it starts on (infinity if none).
inline double ray_clearance(const Arrangement& arr, Point o, Point n, std::size_t own_curve)
{
    double best = std::numeric_limits<double>::infinity();
    const double floor = 1e-14 * arr.scale();
    for (std::size_t c = 0; c < arr.curves().size(); ++c) {
        const Curve& cv = arr.curves()[c];
        if (cv.kind == CurveKind::circle) {
            if (c == own_curve) {
                const double t2 = -2 * dot(o - cv.circle.center, n);
                if (t2 > floor)
                    best = std::min(best, t2);
                continue;
            }
            for (double t : line_circle_params(o, n, cv.circle))
                if (t > floor)
                    best = std::min(best, t);
        } else if (c != own_curve) {
            const Point d = cv.segment.b - cv.segment.a;
            const double den = cross(n, d);
            if (den == 0)
                continue;
            const Point w = cv.segment.a - o;
            const double t = cross(w, d) / den;
            const double s = cross(w, n) / den;
            if (t > floor && s >= 0 && s <= 1)
                best = std::min(best, t);
        }
    }
    return best;
}

inline double ray_to_polygon(const std::vector<Point>& poly, Point o, Point n)
{
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i], d = poly[(i + 1) % poly.size()] - a;
        const double den = cross(n, d);
        if (den == 0)
            continue;
        const double t = cross(a - o, d) / den;
        if (t > 0)
            best = std::min(best, t);
    }
    return best;
}

/// Parameter subintervals of an edge that lie strictly inside the convex
/// polygon.
inline constexpr double sliver_eps = 1e-9;

inline double param_length(const Arrangement& arr, std::size_t edge, double lo, double hi)
{
    const Curve& c = arr.curves()[arr.edges()[edge].curve];
    if (c.kind == CurveKind::circle)
        return (hi - lo) * c.circle.radius;
    return (hi - lo) * distance(c.segment.a, c.segment.b);
}

inline std::vector<std::pair<double, double>> inside_pieces(const Arrangement& arr, std::size_t edge,
                                                            const std::vector<Point>& poly)
{
    const ArrEdge& e = arr.edges()[edge];
    const Curve& c = arr.curves()[e.curve];
    std::vector<double> cuts{e.lo, e.hi};
    if (c.kind == CurveKind::circle) {
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Point a = poly[i], d = poly[(i + 1) % poly.size()] - a;
            for (double t : line_circle_params(a, d, c.circle)) {
                if (t < -sliver_eps || t > 1 + sliver_eps)
                    continue;
                double th = c.circle.theta_of(a + d * t);
                while (th < e.lo)
                    th += 2 * std::numbers::pi;
                if (th < e.hi)
                    cuts.push_back(th);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i])
            continue;
        // Slivers left by rounding where a curve passes through a hull vertex.
        if (param_length(arr, edge, cuts[i], cuts[i + 1]) < sliver_eps * arr.scale())
            continue;
        const Point mid = arr.point_at(edge, 0.5 * (cuts[i] + cuts[i + 1]));
        // A margin keeps segments lying on the hull boundary out.
        if (inside_margin(poly, mid) > sliver_eps * arr.scale())
            out.emplace_back(cuts[i], cuts[i + 1]);
    }
    return out;
}

/// Interior point of the face on the left of h near parameter t.
inline Point nudge_into_face(const Arrangement& arr, std::size_t h, double t, const std::vector<Point>* poly)
{
    const std::size_t edge = Arrangement::edge_of(h);
    const Point m = arr.point_at(edge, t);
    const Point n = arr.left_normal(h, t);
    double reach = ray_clearance(arr, m, n, arr.curve_of(h));
    if (poly)
        reach = std::min(reach, ray_to_polygon(*poly, m, n));
    if (!std::isfinite(reach))
        reach = 2 * arr.scale();
    return m + n * (0.5 * reach);
}

inline void place_samples(const Arrangement& arr, std::vector<Face>& faces)
{
    const auto& hull = arr.hull();
    for (Face& f : faces) {
        std::size_t best_h = no_index;
        double best_len = -1, best_t = 0;
        std::size_t hull_h = no_index;
        double hull_len = -1, hull_t = 0;
        for (std::size_t c : f.cycles)
            for (std::size_t h : arr.cycles()[c].half_edges) {
                const std::size_t e = Arrangement::edge_of(h);
                const ArrEdge& ed = arr.edges()[e];
                const double len = param_length(arr, e, ed.lo, ed.hi);
                if (len > best_len) {
                    best_len = len;
                    best_h = h;
                    best_t = 0.5 * (ed.lo + ed.hi);
                }
                if (hull.size() < 3)
                    continue;
                for (const auto& [lo, hi] : inside_pieces(arr, e, hull)) {
                    const double l = param_length(arr, e, lo, hi);
                    if (l > hull_len) {
                        hull_len = l;
                        hull_h = h;
                        hull_t = 0.5 * (lo + hi);
                    }
                }
            }
        f.sample = best_h == no_index ? Point{} : nudge_into_face(arr, best_h, best_t, nullptr);
        if (hull.size() < 3) {
            f.inside_hull = true;
            f.hull_sample = f.sample;
        } else if (hull_h != no_index) {
            f.inside_hull = true;
            f.hull_sample = nudge_into_face(arr, hull_h, hull_t, &hull);
            f.sample = f.hull_sample;
        } else {
            const Point c = polygon_centroid(hull);
            if (arr.point_in_face(f.id, c)) {
                f.inside_hull = true;
                f.hull_sample = c;
                f.sample = c;
            }
        }
        f.resolved = arr.point_in_face(f.id, f.sample) && arr.clearance(f.sample) > merge_eps * arr.scale() &&
                     (!f.inside_hull || hull.size() < 3 || strictly_inside_convex(hull, f.hull_sample));
    }
}

inline Arrangement build_arrangement_impl(std::vector<Curve> curves, const std::vector<Point>& points,
                                          const std::vector<Point>& hull)
{
    std::stable_partition(curves.begin(), curves.end(), [](const Curve& c) { return c.kind == CurveKind::circle; });
    for (const Curve& c : curves) {
        if (c.kind == CurveKind::circle && !(c.circle.radius > 0 && std::isfinite(c.circle.radius)))
            throw precondition_error("build_arrangement: circle radius must be positive");
        if (c.kind == CurveKind::segment && c.segment.a == c.segment.b)
            throw precondition_error("build_arrangement: zero-length segment");
        for (std::size_t a : c.anchors)
            if (a >= points.size())
                throw precondition_error("build_arrangement: anchor index out of range");
    }

    Arrangement arr;
    arr.num_circles_ = static_cast<std::size_t>(
        std::count_if(curves.begin(), curves.end(), [](const Curve& c) { return c.kind == CurveKind::circle; }));
    arr.scale_ = curve_scale(curves);
    arr.hull_ = hull;
    const std::size_t nc = curves.size();

    Builder b{curves, points, {}, {}, std::vector<std::vector<std::pair<double, std::size_t>>>(nc),
              merge_eps * arr.scale_};
    for (std::size_t i = 0; i < nc; ++i) {
        if (curves[i].kind != CurveKind::segment)
            continue;
        const Segment& s = curves[i].segment;
        for (int end = 0; end < 2; ++end) {
            const Point p = end == 0 ? s.a : s.b;
            std::size_t v = no_index;
            for (std::size_t a : curves[i].anchors)
                if (points[a] == p)
                    v = b.anchored(a);
            if (v == no_index) {
                for (std::size_t w = 0; w < b.vertices.size(); ++w)
                    if (b.vertices[w].anchor == no_index && b.vertices[w].p == p)
                        v = w;
                if (v == no_index)
                    v = b.free_vertex(p);
            }
            b.on(i, v, end == 0 ? 0.0 : 1.0);
        }
    }
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = i + 1; j < nc; ++j) {
            const bool ci = curves[i].kind == CurveKind::circle, cj = curves[j].kind == CurveKind::circle;
            if (ci && cj)
                b.circle_circle(i, j);
            else if (ci && !cj)
                b.circle_segment(i, j);
            else if (!ci && cj)
                b.circle_segment(j, i);
            else
                b.segment_segment(i, j);
        }
    b.check_collisions();

    // Split curves into edges.
    arr.curve_edges_.resize(nc);
    for (std::size_t c = 0; c < nc; ++c) {
        auto& ev = b.events[c];
        if (curves[c].kind == CurveKind::circle && ev.empty()) {
            b.vertices.push_back({curves[c].circle.at(0.0), no_index, true, {}});
            ev.emplace_back(0.0, b.vertices.size() - 1);
        }
        std::sort(ev.begin(), ev.end());
        const std::size_t k = ev.size();
        if (curves[c].kind == CurveKind::circle) {
            for (std::size_t i = 0; i < k; ++i) {
                const auto& [t0, v0] = ev[i];
                const auto& [t1, v1] = ev[(i + 1) % k];
                const double hi = i + 1 < k ? t1 : t1 + 2 * std::numbers::pi;
                arr.curve_edges_[c].push_back(arr.edges_.size());
                arr.edges_.push_back({c, v0, v1, t0, hi});
            }
        } else {
            for (std::size_t i = 0; i + 1 < k; ++i) {
                arr.curve_edges_[c].push_back(arr.edges_.size());
                arr.edges_.push_back({c, ev[i].second, ev[i + 1].second, ev[i].first, ev[i + 1].first});
            }
        }
    }
    arr.curves_ = std::move(curves);
    arr.vertices_ = std::move(b.vertices);

    // Counterclockwise order of outgoing half-edges: tangent angle, then
    // signed curvature for tangent curves.
    struct Dir
    {
        double angle;
        double curvature;
        std::size_t h;
    };
    std::vector<std::vector<Dir>> dirs(arr.vertices_.size());
    for (std::size_t e = 0; e < arr.edges_.size(); ++e) {
        const ArrEdge& ed = arr.edges_[e];
        const Curve& c = arr.curves_[ed.curve];
        for (int side = 0; side < 2; ++side) {
            const std::size_t h = 2 * e + side;
            Point t;
            double kappa = 0;
            if (c.kind == CurveKind::circle) {
                const double th = side == 0 ? ed.lo : ed.hi;
                t = Point{-std::sin(th), std::cos(th)};
                kappa = 1 / c.circle.radius;
                if (side == 1) {
                    t = -t;
                    kappa = -kappa;
                }
            } else {
                t = c.segment.b - c.segment.a;
                if (side == 1)
                    t = -t;
            }
            double ang = std::atan2(t.y, t.x);
            if (ang < 0)
                ang += 2 * std::numbers::pi;
            dirs[arr.origin(h)].push_back({ang, kappa, h});
        }
    }
    for (std::size_t v = 0; v < dirs.size(); ++v) {
        auto& d = dirs[v];
        std::sort(d.begin(), d.end(), [](const Dir& a, const Dir& b) {
            if (std::abs(a.angle - b.angle) > 1e-12)
                return a.angle < b.angle;
            return a.curvature < b.curvature;
        });
        for (const Dir& x : d)
            arr.vertices_[v].out.push_back(x.h);
    }

    const std::size_t nh = arr.num_half_edges();
    arr.next_.assign(nh, no_index);
    {
        std::vector<std::size_t> pos(nh);
        for (const ArrVertex& v : arr.vertices_)
            for (std::size_t i = 0; i < v.out.size(); ++i)
                pos[v.out[i]] = i;
        for (std::size_t h = 0; h < nh; ++h) {
            const std::size_t t = Arrangement::twin(h);
            const auto& out = arr.vertices_[arr.origin(t)].out;
            arr.next_[h] = out[(pos[t] + out.size() - 1) % out.size()];
        }
    }

    // Boundary cycles.
    std::vector<std::size_t> cycle_of(nh, no_index);
    for (std::size_t h = 0; h < nh; ++h) {
        if (cycle_of[h] != no_index)
            continue;
        FaceCycle cyc;
        std::size_t g = h;
        do {
            cycle_of[g] = arr.cycles_.size();
            cyc.half_edges.push_back(g);
            cyc.area += half_edge_area(arr, g);
            g = arr.next_[g];
            if (cyc.half_edges.size() > nh)
                throw structural_error("build_arrangement: boundary cycle does not close");
        } while (g != h);
        arr.cycles_.push_back(std::move(cyc));
    }

    // Connected components of the curve graph.
    std::vector<std::size_t> comp(arr.vertices_.size());
    std::iota(comp.begin(), comp.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (comp[x] != x)
            x = comp[x] = comp[comp[x]];
        return x;
    };
    for (const ArrEdge& e : arr.edges_)
        comp[find(e.from)] = find(e.to);

    // Each component has exactly one outer cycle, the one with the most
    // negative area. Sliver faces can have areas below rounding noise, so
    // their sign is not trusted.
    std::map<std::size_t, std::size_t> outer_cycle;
    for (std::size_t c = 0; c < arr.cycles_.size(); ++c) {
        const std::size_t k = find(arr.origin(arr.cycles_[c].half_edges.front()));
        auto [it, fresh] = outer_cycle.emplace(k, c);
        if (!fresh && arr.cycles_[c].area < arr.cycles_[it->second].area)
            it->second = c;
    }

    Face outer;
    outer.id = 0;
    arr.faces_.push_back(outer);
    std::vector<std::size_t> holes;
    for (std::size_t c = 0; c < arr.cycles_.size(); ++c) {
        const std::size_t k = find(arr.origin(arr.cycles_[c].half_edges.front()));
        if (outer_cycle.at(k) != c) {
            Face f;
            f.id = arr.faces_.size();
            f.bounded = true;
            f.cycles.push_back(c);
            arr.cycles_[c].face = f.id;
            arr.faces_.push_back(std::move(f));
        } else {
            holes.push_back(c);
        }
    }
    for (std::size_t c : holes) {
        const std::size_t h0 = arr.cycles_[c].half_edges.front();
        const Point probe = arr.vertices_[arr.origin(h0)].p;
        const std::size_t my_comp = find(arr.origin(h0));
        std::size_t best = 0;
        double best_area = std::numeric_limits<double>::infinity();
        for (std::size_t f = 1; f < arr.faces_.size(); ++f) {
            const std::size_t oc = arr.faces_[f].cycles[0];
            if (find(arr.origin(arr.cycles_[oc].half_edges.front())) == my_comp)
                continue;
            if (arr.cycles_[oc].area < best_area && arr.winding(oc, probe) == 1) {
                best = f;
                best_area = arr.cycles_[oc].area;
            }
        }
        arr.cycles_[c].face = best;
        arr.faces_[best].cycles.push_back(c);
    }
    arr.face_of_.assign(nh, no_index);
    for (const FaceCycle& c : arr.cycles_)
        for (std::size_t h : c.half_edges)
            arr.face_of_[h] = c.face;

    {
        std::size_t components = 0;
        for (std::size_t v = 0; v < comp.size(); ++v)
            components += find(v) == v;
        const long long euler = static_cast<long long>(arr.vertices_.size()) -
                                static_cast<long long>(arr.edges_.size()) +
                                static_cast<long long>(arr.faces_.size());
        if (euler != 1 + static_cast<long long>(components))
            throw structural_error("build_arrangement: Euler relation violated");
    }

    // Depth-first traversal from the unbounded face; crossing a circle adds
    // or removes exactly that disk.
    {
        std::vector<bool> seen(arr.faces_.size(), false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        arr.traversal_.push_back({0});
        while (!stack.empty()) {
            const std::size_t f = stack.back();
            bool pushed = false;
            for (std::size_t c : arr.faces_[f].cycles) {
                for (std::size_t h : arr.cycles_[c].half_edges) {
                    const std::size_t g = arr.face_of_[Arrangement::twin(h)];
                    if (seen[g])
                        continue;
                    seen[g] = true;
                    FaceVisit visit{g, f, h};
                    auto set = arr.faces_[f].invalid_set;
                    const std::size_t cv = arr.curve_of(h);
                    if (arr.curves_[cv].kind == CurveKind::circle) {
                        if (Arrangement::forward(h)) {
                            visit.removed = cv;
                            set.erase(std::find(set.begin(), set.end(), cv));
                        } else {
                            visit.added = cv;
                            set.insert(std::lower_bound(set.begin(), set.end(), cv), cv);
                        }
                    }
                    arr.faces_[g].invalid_set = std::move(set);
                    arr.faces_[g].depth = arr.faces_[g].invalid_set.size();
                    arr.traversal_.push_back(visit);
                    stack.push_back(g);
                    pushed = true;
                    break;
                }
                if (pushed)
                    break;
            }
            if (!pushed)
                stack.pop_back();
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw structural_error("build_arrangement: face graph is disconnected");
    }
    place_samples(arr, arr.faces_);
    return arr;
}

} // namespace detail

/// Arrangement of circles and (optional) segments. Points are the input
/// points referenced by curve anchors; when a hull polygon is given, faces
/// are flagged by whether they meet its interior.
inline Arrangement build_arrangement(std::vector<Curve> curves, const std::vector<Point>& points = {},
                                     const std::vector<Point>& hull = {})
{
    return detail::build_arrangement_impl(std::move(curves), points, hull);
}

inline Arrangement build_arrangement(const std::vector<Circle>& circles, const std::vector<Segment>& segments = {})
{
    std::vector<Curve> curves;
    for (const Circle& c : circles)
        curves.push_back({CurveKind::circle, c, {}, {}});
    for (const Segment& s : segments)
        curves.push_back({CurveKind::segment, {}, s, {}});
    return build_arrangement(std::move(curves));
}

/// Arrangement of the (constrained) Delaunay circles of t; circle i belongs
/// to triangle i. With include_constraints, constrained edges are added as
/// segment curves after the circles.
inline Arrangement build_arrangement(const Triangulation& t, bool include_constraints = false)
{
    std::vector<Curve> curves;
    for (const DelaunayCircle& dc : delaunay_circles(t)) {
        const auto& tri = t.triangles()[dc.triangle];
        curves.push_back({CurveKind::circle, dc.circle, {}, {tri[0], tri[1], tri[2]}});
    }
    if (include_constraints)
        for (const Edge& e : t.constrained_edges())
            curves.push_back({CurveKind::segment, {}, {t.vertices()[e.a], t.vertices()[e.b]}, {e.a, e.b}});
    return build_arrangement(std::move(curves), t.vertices(), t.hull_polygon());
}

/// Complexity and depth statistics over the circles of the arrangement. The
/// triangulation, when given, supplies the Delaunay edge count.
inline ArrangementStats stats(const Arrangement& arr, const Triangulation* t = nullptr)
{
    ArrangementStats s;
    s.m = arr.num_circles();
    s.e = arr.edges().size();
    s.f = arr.faces().size();
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const ArrVertex& v : arr.vertices()) {
        if (v.artificial)
            continue;
        ++s.v;
        if (v.out.size() == 4)
            ++s.u;
        std::vector<std::size_t> through;
        for (std::size_t h : v.out) {
            const std::size_t c = arr.curve_of(h);
            if (c < s.m && std::find(through.begin(), through.end(), c) == through.end())
                through.push_back(c);
        }
        std::sort(through.begin(), through.end());
        for (std::size_t i = 0; i < through.size(); ++i)
            for (std::size_t j = i + 1; j < through.size(); ++j)
                pairs.emplace(through[i], through[j]);
    }
    s.k = s.v + s.e + s.f;
    s.X = pairs.size();
    s.x.assign(s.m, 0);
    for (const auto& [i, j] : pairs) {
        ++s.x[i];
        ++s.x[j];
    }
    double total = 0;
    for (const Face& f : arr.faces()) {
        s.d = std::max(s.d, f.depth);
        if (f.inside_hull)
            s.d_hull = std::max(s.d_hull, f.depth);
        total += static_cast<double>(f.depth);
    }
    s.d_bar = s.f ? total / static_cast<double>(s.f) : 0.0;
    s.d_i.assign(s.m, 0);
    for (std::size_t c = 0; c < s.m; ++c)
        for (std::size_t e : arr.curve_edges(c))
            s.d_i[c] = std::max({s.d_i[c], arr.faces()[arr.inner_face(e)].depth, arr.faces()[arr.outer_face(e)].depth});
    if (t)
        s.e_dt = t->edges().size();
    return s;
}

} // namespace steiner

#endif // STEINER_ARRANGEMENT_HPP
