#ifndef STEINER_BOUNDARY_SEARCH_HPP
#define STEINER_BOUNDARY_SEARCH_HPP

#include "steiner/arrangement.hpp"
#include "steiner/envelope.hpp"
#include "steiner/errors.hpp"
#include "steiner/parallel.hpp"
#include "steiner/region_search.hpp"
#include "steiner/triangulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

namespace steiner {

/// apex: angle q-p-r at the new point; base_q: angle p-q-r; base_r: angle p-r-q.
enum class AngleKind { apex, base_q, base_r };

inline const char* to_string(AngleKind k)
{
    switch (k) {
    case AngleKind::apex:
        return "apex";
    case AngleKind::base_q:
        return "base_q";
    case AngleKind::base_r:
        return "base_r";
    }
    return "unknown";
}

/// One fan angle as a function of the position angle of p on a circle.
/// The domain lies in [0, 2*pi].
struct AngleFunction
{
    std::size_t circle = 0;
    AngleKind kind = AngleKind::apex;
    VertexId q_id = 0, r_id = 0;
    Point q, r;
    Circle c;
    std::vector<Interval> domain;

    double value(double theta) const
    {
        const Point p = c.at(theta);
        switch (kind) {
        case AngleKind::apex:
            return angle_between(p, q, r);
        case AngleKind::base_q:
            return angle_between(q, p, r);
        case AngleKind::base_r:
            return angle_between(r, q, p);
        }
        return 0;
    }

    /// Parameters in (lo, hi) where the arc passes through q or r.
    std::vector<double> breaks(double lo, double hi) const
    {
        std::vector<double> out;
        for (Point v : {q, r}) {
            if (std::abs(distance(v, c.center) - c.radius) > 1e-9 * c.radius)
                continue;
            for (double t = c.theta_of(v) - 2 * std::numbers::pi; t < hi; t += 2 * std::numbers::pi)
                if (t > lo)
                    out.push_back(t);
        }
        return out;
    }

    /// |d value / d theta| <= radius * |gradient|, with the gradient bounded
    /// through lower bounds on the distances from the arc to q and r.
    double lipschitz(double lo, double hi) const
    {
        const Point mid = c.at(0.5 * (lo + hi));
        const double half = 0.5 * (hi - lo) * c.radius;
        const double dq = distance(mid, q) - half, dr = distance(mid, r) - half;
        const double inf = std::numeric_limits<double>::infinity();
        const double gq = dq > 0 ? 1 / dq : inf, gr = dr > 0 ? 1 / dr : inf;
        switch (kind) {
        case AngleKind::apex:
            return c.radius * (gq + gr);
        case AngleKind::base_q:
            return c.radius * gq;
        case AngleKind::base_r:
            return c.radius * gr;
        }
        return inf;
    }
};

struct BoundaryCandidate
{
    std::size_t circle = no_index;
    double theta = 0;
    // Nudged off the circle into the better of the two incident faces.
    Point point;
    double value = 0;
    double envelope_value = 0;
    std::size_t inner_face = no_index;
    std::size_t outer_face = no_index;
    bool inner_side = true;
};

struct CircleDiagnostics
{
    std::size_t circle = 0;
    // Distinct angle functions on the inner and outer side; f is the larger
    // of the two. runs counts the maximal pieces fed to the envelopes.
    std::size_t f_inner = 0, f_outer = 0, f = 0;
    std::size_t runs = 0;
    std::size_t envelope_pieces = 0;
    std::size_t tangential = 0;
    std::size_t identical = 0;
    std::size_t max_crossings = 0;
    // Degree-4 vertex passings whose function delta is not {+3,-6}/{+6,-3}.
    std::size_t delta_violations = 0;
};

struct BoundarySearchResult
{
    std::optional<BoundaryCandidate> best;
    std::vector<CircleDiagnostics> circles;
    std::size_t candidates_verified = 0;
};

using PointEvaluator = std::function<double(Point)>;

/// Options shared by the unconstrained and constrained boundary searches.
struct BoundarySearchOptions
{
    // Restart every function at each arrangement edge (constrained mode).
    bool per_edge = false;
    unsigned threads = 1;
    // Relative radial offset used to verify a point on a circle.
    double nudge = 1e-9;
};

namespace detail {

using FunctionKey = std::tuple<AngleKind, VertexId, VertexId>;

struct CirclePiece
{
    double lo, hi;
    std::size_t edge;
    // Input point at lo, if any: functions through it restart there.
    std::size_t anchor_at_lo = no_index;
    bool edge_start = false;
};

inline std::vector<CirclePiece> circle_pieces(const Triangulation& t, const Arrangement& arr, std::size_t c)
{
    const auto& tri = t.triangles()[c];
    const Circle& circ = arr.curves()[c].circle;
    std::vector<CirclePiece> out;
    for (std::size_t e : arr.curve_edges(c)) {
        const ArrEdge& ed = arr.edges()[e];
        std::vector<std::pair<double, std::size_t>> cuts{{ed.lo, arr.vertices()[ed.from].anchor}};
        for (VertexId a : tri) {
            if (a == arr.vertices()[ed.from].anchor || a == arr.vertices()[ed.to].anchor)
                continue;
            double th = circ.theta_of(t.vertices()[a]);
            while (th < ed.lo)
                th += 2 * std::numbers::pi;
            if (th > ed.lo && th < ed.hi)
                cuts.emplace_back(th, a);
        }
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i < cuts.size(); ++i) {
            const double hi = i + 1 < cuts.size() ? cuts[i + 1].first : ed.hi;
            out.push_back({cuts[i].first, hi, e, cuts[i].second, i == 0});
        }
    }
    return out;
}

/// Parameter intervals of a circle strictly inside a convex polygon, as
/// sub-intervals of [0, 2*pi].
inline std::vector<Interval> circle_inside(const Circle& c, const std::vector<Point>& poly)
{
    std::vector<double> cuts{0, 2 * std::numbers::pi};
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i], d = poly[(i + 1) % poly.size()] - a;
        for (double s : line_circle_params(a, d, c))
            if (s >= -sliver_eps && s <= 1 + sliver_eps)
                cuts.push_back(c.theta_of(a + d * s));
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<Interval> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < sliver_eps)
            continue;
        if (strictly_inside_convex(poly, c.at(0.5 * (cuts[i] + cuts[i + 1])))) {
            if (!out.empty() && out.back().hi == cuts[i])
                out.back().hi = cuts[i + 1];
            else
                out.push_back({cuts[i], cuts[i + 1]});
        }
    }
    return out;
}

/// Splits [lo, hi] (hi may exceed 2*pi) into pieces within [0, 2*pi] and
/// intersects them with the given sorted intervals.
inline std::vector<Interval> clip_to(double lo, double hi, const std::vector<Interval>& allowed)
{
    const double two_pi = 2 * std::numbers::pi;
    std::vector<Interval> parts;
    if (hi <= two_pi)
        parts.push_back({lo, hi});
    else {
        parts.push_back({lo, two_pi});
        parts.push_back({0, std::min(hi - two_pi, two_pi)});
    }
    std::vector<Interval> out;
    for (Interval p : parts)
        for (Interval a : allowed) {
            const double s = std::max(p.lo, a.lo), e = std::min(p.hi, a.hi);
            if (e > s)
                out.push_back({s, e});
        }
    std::sort(out.begin(), out.end(), [](Interval x, Interval y) { return x.lo < y.lo; });
    return out;
}

inline std::vector<FunctionKey> fan_keys(const Hole& h)
{
    std::vector<FunctionKey> out;
    for (std::size_t i = 0, n = h.ids.size(); i < n; ++i) {
        const VertexId q = h.ids[i], r = h.ids[(i + 1) % n];
        out.emplace_back(AngleKind::apex, q, r);
        out.emplace_back(AngleKind::base_q, q, r);
        out.emplace_back(AngleKind::base_r, q, r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct SideFunctions
{
    std::vector<AngleFunction> fns;
    // Full (unclipped) domain per function, for counting and tests.
    std::vector<std::pair<double, double>> spans;
};

/// Maximal runs of each fan angle along one side of the circle.
inline SideFunctions side_functions(const Triangulation& t, std::size_t c, const Circle& circ,
                                    const std::vector<CirclePiece>& pieces,
                                    const std::vector<std::optional<Hole>>& holes, bool per_edge,
                                    std::size_t* delta_violations, const std::vector<bool>* degree4_start)
{
    const std::size_t np = pieces.size();
    std::vector<std::vector<FunctionKey>> keys(np);
    for (std::size_t i = 0; i < np; ++i)
        if (holes[i])
            keys[i] = fan_keys(*holes[i]);

    auto breaks = [&](std::size_t i, const FunctionKey& k) {
        if (per_edge && pieces[i].edge_start)
            return true;
        const std::size_t a = pieces[i].anchor_at_lo;
        return a != no_index && (std::get<1>(k) == a || std::get<2>(k) == a);
    };

    struct Run
    {
        FunctionKey key;
        double lo, hi;
    };
    std::vector<Run> runs;
    std::map<FunctionKey, std::size_t> open;
    for (std::size_t i = 0; i < np; ++i) {
        std::map<FunctionKey, std::size_t> next;
        std::size_t gained = 0, lost = 0;
        for (const FunctionKey& k : keys[i]) {
            auto it = open.find(k);
            if (it != open.end() && !breaks(i, k)) {
                runs[it->second].hi = pieces[i].hi;
                next.emplace(k, it->second);
            } else {
                runs.push_back({k, pieces[i].lo, pieces[i].hi});
                next.emplace(k, runs.size() - 1);
                ++gained;
            }
        }
        for (const auto& [k, idx] : open)
            if (!next.count(k) || next.at(k) != idx)
                ++lost;
        if (delta_violations && degree4_start && i > 0 && (*degree4_start)[i] && holes[i] && holes[i - 1] &&
            !((gained == 3 && lost == 6) || (gained == 6 && lost == 3)))
            ++*delta_violations;
        open = std::move(next);
    }
    // Close the cycle: runs alive at the end continue into the first piece.
    if (np > 0) {
        std::vector<bool> dead(runs.size(), false);
        for (const auto& [k, idx] : open) {
            if (breaks(0, k))
                continue;
            for (std::size_t j = 0; j < runs.size() && runs[j].lo == pieces[0].lo; ++j) {
                if (runs[j].key != k || j == idx)
                    continue;
                runs[idx].hi = runs[j].hi + 2 * std::numbers::pi;
                dead[j] = true;
            }
        }
        std::vector<Run> kept;
        for (std::size_t j = 0; j < runs.size(); ++j)
            if (!dead[j])
                kept.push_back(runs[j]);
        runs = std::move(kept);
    }

    SideFunctions out;
    for (const Run& r : runs) {
        AngleFunction f;
        f.circle = c;
        f.kind = std::get<0>(r.key);
        f.q_id = std::get<1>(r.key);
        f.r_id = std::get<2>(r.key);
        f.q = t.vertices()[f.q_id];
        f.r = t.vertices()[f.r_id];
        f.c = circ;
        out.fns.push_back(std::move(f));
        out.spans.emplace_back(r.lo, std::min(r.hi, r.lo + 2 * std::numbers::pi));
    }
    return out;
}

struct PieceBest
{
    double theta;
    double value;
};

/// Maximum of min(f, cap) over [lo, hi] by sampling and golden-section
/// refinement around the best sample.
template <class F>
PieceBest maximize_capped(const F& f, double lo, double hi, double cap)
{
    constexpr int samples = 16;
    auto val = [&](double th) { return std::min(f.value(th), cap); };
    PieceBest best{lo, val(lo)};
    int best_i = 0;
    for (int i = 1; i <= samples; ++i) {
        const double th = lo + (hi - lo) * i / samples;
        const double v = val(th);
        if (v > best.value) {
            best = {th, v};
            best_i = i;
        }
    }
    if (best.value >= cap)
        return best;
    double a = lo + (hi - lo) * std::max(0, best_i - 1) / samples;
    double b = lo + (hi - lo) * std::min(samples, best_i + 1) / samples;
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = val(x1), f2 = val(x2);
    while (b - a > 1e-13) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = val(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = val(x1);
        }
    }
    for (double th : {x1, x2})
        if (val(th) > best.value)
            best = {th, val(th)};
    return best;
}

inline constexpr double min_window = 1e-11;

struct SideCandidate
{
    double envelope_value;
    double theta;
    std::size_t circle;
    std::size_t edge;
};

inline std::size_t distinct_functions(const std::vector<AngleFunction>& fns)
{
    std::set<FunctionKey> keys;
    for (const auto& f : fns)
        keys.emplace(f.kind, f.q_id, f.r_id);
    return keys.size();
}

} // namespace detail

/// Function sets of the two sides of a circle (inner first).
struct CircleFunctions
{
    std::array<std::vector<AngleFunction>, 2> sides;
    std::array<std::vector<std::pair<double, double>>, 2> spans;
};

using FaceHoleFn = std::function<const std::optional<Hole>&(std::size_t face)>;

namespace detail {

inline std::vector<std::optional<Hole>> piece_holes(const Arrangement& arr, const std::vector<CirclePiece>& pieces,
                                                    int side, const FaceHoleFn& hole_of)
{
    std::vector<std::optional<Hole>> out;
    for (const detail::CirclePiece& p : pieces) {
        const std::size_t f = side == 0 ? arr.inner_face(p.edge) : arr.outer_face(p.edge);
        out.push_back(hole_of(f));
    }
    return out;
}

} // namespace detail

/// Hole of every face whose invalid set forms a valid fan; faces where the
/// union is not a simple star (possible outside the hull) have none.
inline std::vector<std::optional<Hole>> face_holes(const Triangulation& t, const Arrangement& arr,
                                                   const InvalidSetFn& invalid_of)
{
    std::vector<std::optional<Hole>> out(arr.faces().size());
    for (const Face& f : arr.faces()) {
        auto set = invalid_of(f.id);
        if (set.empty())
            continue;
        try {
            out[f.id] = hole_for(t, set);
        } catch (const structural_error&) {
        }
    }
    return out;
}

inline CircleFunctions functions_on_circle(std::size_t c, const Arrangement& arr, const Triangulation& t,
                                           const FaceHoleFn& hole_of, bool per_edge = false,
                                           std::size_t* delta_violations = nullptr)
{
    const auto pieces = detail::circle_pieces(t, arr, c);
    std::vector<bool> degree4(pieces.size(), false);
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (pieces[i].anchor_at_lo != no_index || !pieces[i].edge_start)
            continue;
        const ArrVertex& v = arr.vertices()[arr.edges()[pieces[i].edge].from];
        degree4[i] = !v.artificial && v.out.size() == 4;
    }
    CircleFunctions out;
    for (int side = 0; side < 2; ++side) {
        const auto holes = detail::piece_holes(arr, pieces, side, hole_of);
        auto sf = detail::side_functions(t, c, arr.curves()[c].circle, pieces, holes, per_edge, delta_violations,
                                         &degree4);
        out.sides[side] = std::move(sf.fns);
        out.spans[side] = std::move(sf.spans);
    }
    return out;
}

/// Functions on circle c of an unconstrained arrangement built from t.
inline CircleFunctions functions_on_circle(std::size_t c, const Arrangement& arr, const Triangulation& t)
{
    const auto holes = face_holes(t, arr, [&](std::size_t f) { return arr.faces()[f].invalid_set; });
    return functions_on_circle(c, arr, t, [&](std::size_t f) -> const std::optional<Hole>& { return holes[f]; });
}

/// Envelope search over circle boundaries with caller-supplied invalid sets
/// and point evaluator (the constrained pipeline reuses this with per-edge
/// function sets).
inline BoundarySearchResult boundary_search_with(const Triangulation& t, const Arrangement& arr,
                                                 const InvalidSetFn& invalid_of, const PointEvaluator& evaluate,
                                                 const BoundarySearchOptions& opt = {})
{
    const AngleFloor floor(t);
    const auto holes = face_holes(t, arr, invalid_of);
    std::vector<double> face_floor(arr.faces().size());
    for (const Face& f : arr.faces())
        face_floor[f.id] = floor(invalid_of(f.id));
    const FaceHoleFn hole_of = [&](std::size_t f) -> const std::optional<Hole>& { return holes[f]; };
    const std::vector<Point>& hull = arr.hull();

    const std::size_t m = arr.num_circles();
    BoundarySearchResult result;
    result.circles.resize(m);
    std::vector<std::vector<detail::SideCandidate>> per_circle(m);

    parallel_for(m, opt.threads, [&](std::size_t c) {
        CircleDiagnostics& diag = result.circles[c];
        diag.circle = c;
        const Circle& circ = arr.curves()[c].circle;
        const auto inside = hull.size() >= 3 ? detail::circle_inside(circ, hull)
                                             : std::vector<Interval>{{0, 2 * std::numbers::pi}};
        const auto pieces = detail::circle_pieces(t, arr, c);
        const CircleFunctions cf = functions_on_circle(c, arr, t, hole_of, opt.per_edge, &diag.delta_violations);
        diag.f_inner = detail::distinct_functions(cf.sides[0]);
        diag.f_outer = detail::distinct_functions(cf.sides[1]);
        diag.runs = cf.sides[0].size() + cf.sides[1].size();
        diag.f = std::max(diag.f_inner, diag.f_outer);
        if (inside.empty())
            return;
        for (int side = 0; side < 2; ++side) {
            std::vector<AngleFunction> fns = cf.sides[side];
            for (std::size_t i = 0; i < fns.size(); ++i)
                fns[i].domain = detail::clip_to(cf.spans[side][i].first, cf.spans[side][i].second, inside);
            std::erase_if(fns, [](const AngleFunction& f) { return f.domain.empty(); });
            if (fns.empty())
                continue;
            const Envelope env = lower_envelope(fns);
            diag.envelope_pieces += env.pieces.size();
            diag.tangential += env.tangential;
            diag.identical += env.identical;
            diag.max_crossings = std::max(diag.max_crossings, env.max_crossings);
            for (const detail::CirclePiece& p : pieces) {
                const std::size_t face = side == 0 ? arr.inner_face(p.edge) : arr.outer_face(p.edge);
                if (!holes[face])
                    continue;
                const double cap = face_floor[face];
                for (Interval w : detail::clip_to(p.lo, p.hi, inside)) {
                    for (const EnvelopePiece& ep : env.pieces) {
                        const double lo = std::max(ep.lo, w.lo), hi = std::min(ep.hi, w.hi);
                        // Rounding at the window ends can leak a neighbouring
                        // face's function into the window.
                        if (hi - lo < detail::min_window)
                            continue;
                        const auto pb = detail::maximize_capped(fns[ep.fn], lo, hi, cap);
                        per_circle[c].push_back({pb.value, pb.theta, c, p.edge});
                    }
                }
            }
        }
    });

    std::vector<detail::SideCandidate> all;
    for (auto& v : per_circle)
        all.insert(all.end(), v.begin(), v.end());
    std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.envelope_value > b.envelope_value || (a.envelope_value == b.envelope_value && a.circle < b.circle);
    });
    // Verify in order of envelope value; later candidates cannot win once
    // their envelope value is clearly below the best verified value.
    for (const auto& cand : all) {
        if (result.best && cand.envelope_value < result.best->value - 1e-7)
            break;
        const Circle& circ = arr.curves()[cand.circle].circle;
        const Point dir{std::cos(cand.theta), std::sin(cand.theta)};
        BoundaryCandidate bc;
        bc.circle = cand.circle;
        bc.theta = cand.theta;
        bc.envelope_value = cand.envelope_value;
        bc.inner_face = arr.inner_face(cand.edge);
        bc.outer_face = arr.outer_face(cand.edge);
        bool any = false;
        for (int side = 0; side < 2; ++side) {
            const double rr = circ.radius * (side == 0 ? 1 - opt.nudge : 1 + opt.nudge);
            const Point p = circ.center + dir * rr;
            double v;
            try {
                v = evaluate(p);
            } catch (const precondition_error&) {
                continue;
            }
            ++result.candidates_verified;
            if (!any || v > bc.value) {
                bc.value = v;
                bc.point = p;
                bc.inner_side = side == 0;
                any = true;
            }
        }
        if (any && (!result.best || bc.value > result.best->value))
            result.best = bc;
    }
    return result;
}

/// Best placement on the Delaunay circles of t (unconstrained mode).
inline BoundarySearchResult boundary_search(const Triangulation& t, const Arrangement& arr,
                                            const BoundarySearchOptions& opt = {})
{
    const InsertionEvaluator eval(t.vertices());
    return boundary_search_with(
        t, arr, [&](std::size_t f) { return arr.faces()[f].invalid_set; }, [&](Point p) { return eval(p); }, opt);
}

} // namespace steiner

#endif // STEINER_BOUNDARY_SEARCH_HPP
