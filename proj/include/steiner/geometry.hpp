#ifndef STEINER_GEOMETRY_HPP
#define STEINER_GEOMETRY_HPP

#include "steiner/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace steiner {

/// Near-tie tolerance for angle comparisons, in radians.
inline constexpr double angle_eps = 1e-9;
/// Relative tolerance used when merging computed points.
inline constexpr double merge_eps = 1e-12;

struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator-(Point a) { return {-a.x, -a.y}; }
    friend constexpr Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr Point operator*(double s, Point a) { return {a.x * s, a.y * s}; }
    friend constexpr Point operator/(Point a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Point a, Point b) = default;
    friend constexpr auto operator<=>(Point a, Point b) = default;
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
/// Counterclockwise rotation by a right angle.
inline constexpr Point perp(Point a) { return {-a.y, a.x}; }
inline Point on_circle_at(Point center, double radius, double theta)
{
    return {center.x + radius * std::cos(theta), center.y + radius * std::sin(theta)};
}

struct Circle
{
    Point center;
    double radius = 0.0;

    Point at(double theta) const { return on_circle_at(center, radius, theta); }
    /// Angular parameter of q as seen from the center, in [0, 2pi).
    double theta_of(Point q) const
    {
        double t = std::atan2(q.y - center.y, q.x - center.x);
        return t < 0.0 ? t + 2.0 * std::numbers::pi : t;
    }
};

struct Segment
{
    Point a;
    Point b;
};

enum class Sign : int { negative = -1, zero = 0, positive = 1 };

inline constexpr Sign sign_of(int v) { return v > 0 ? Sign::positive : (v < 0 ? Sign::negative : Sign::zero); }
inline constexpr Sign operator-(Sign s) { return static_cast<Sign>(-static_cast<int>(s)); }

namespace detail {

using rational = boost::multiprecision::cpp_rational;

inline Sign sign_of(const rational& r) { return ::steiner::sign_of(r.sign()); }

inline Sign orient_exact(Point a, Point b, Point c)
{
    const rational acx = rational(a.x) - rational(c.x);
    const rational bcx = rational(b.x) - rational(c.x);
    const rational acy = rational(a.y) - rational(c.y);
    const rational bcy = rational(b.y) - rational(c.y);
    return sign_of(rational(acx * bcy - acy * bcx));
}

inline Sign in_disk_exact(Point a, Point b, Point c, Point d)
{
    const rational adx = rational(a.x) - rational(d.x), ady = rational(a.y) - rational(d.y);
    const rational bdx = rational(b.x) - rational(d.x), bdy = rational(b.y) - rational(d.y);
    const rational cdx = rational(c.x) - rational(d.x), cdy = rational(c.y) - rational(d.y);
    const rational alift = adx * adx + ady * ady;
    const rational blift = bdx * bdx + bdy * bdy;
    const rational clift = cdx * cdx + cdy * cdy;
    const rational det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
                         clift * (adx * bdy - bdx * ady);
    return sign_of(det);
}

// Static filter bounds from Shewchuk's robust predicates.
inline constexpr double ccw_err_bound = 3.3306690738754716e-16;
inline constexpr double icc_err_bound = 1.1102230246251577e-15;

} // namespace detail

/// Sign of twice the signed area of (a, b, c); positive for a left turn.
inline Sign orient(Point a, Point b, Point c)
{
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;
    const double bound = detail::ccw_err_bound * (std::abs(detleft) + std::abs(detright));
    if (det > bound)
        return Sign::positive;
    if (-det > bound)
        return Sign::negative;
    if (detleft == 0.0 && detright == 0.0)
        return Sign::zero;
    return detail::orient_exact(a, b, c);
}

/// Sign of the incircle determinant without checking the orientation of
/// (a, b, c). Positive means d is inside when (a, b, c) is counterclockwise.
inline Sign in_disk_unchecked(Point a, Point b, Point c, Point d)
{
    const double adx = a.x - d.x, ady = a.y - d.y;
    const double bdx = b.x - d.x, bdy = b.y - d.y;
    const double cdx = c.x - d.x, cdy = c.y - d.y;
    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double bound = detail::icc_err_bound * permanent;
    if (det > bound)
        return Sign::positive;
    if (-det > bound)
        return Sign::negative;
    return detail::in_disk_exact(a, b, c, d);
}

/// Positive iff d lies strictly inside the circumcircle of the
/// counterclockwise triangle (a, b, c); zero iff the four are cocircular.
inline Sign in_disk(Point a, Point b, Point c, Point d)
{
    if (orient(a, b, c) != Sign::positive)
        throw precondition_error("in_disk: (a, b, c) must be counterclockwise");
    return in_disk_unchecked(a, b, c, d);
}

inline Circle circumcircle(Point a, Point b, Point c)
{
    if (orient(a, b, c) == Sign::zero)
        throw degeneracy_error("circumcircle: collinear points");
    // Relative to a for accuracy.
    const Point ab = b - a;
    const Point ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double ab2 = dot(ab, ab);
    const double ac2 = dot(ac, ac);
    const Point off{(ac.y * ab2 - ab.y * ac2) / d, (ab.x * ac2 - ac.x * ab2) / d};
    const Point center = a + off;
    // Average the three distances to damp construction error.
    const double r = (distance(center, a) + distance(center, b) + distance(center, c)) / 3.0;
    return {center, r};
}

/// Angle q-apex-r in radians, in [0, pi].
inline double angle_between(Point apex, Point q, Point r)
{
    const Point u = q - apex;
    const Point v = r - apex;
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

/// Angle q-apex-r. Throws when apex coincides with q or r.
inline double angle_at(Point apex, Point q, Point r)
{
    if (apex == q || apex == r)
        throw precondition_error("angle_at: apex coincides with an endpoint");
    return angle_between(apex, q, r);
}

/// Common points of two circles, sorted by angular parameter on c1.
inline std::vector<Point> circle_intersections(const Circle& c1, const Circle& c2)
{
    if (c1.center == c2.center && c1.radius == c2.radius)
        throw precondition_error("circle_intersections: identical circles");
    const Point delta = c2.center - c1.center;
    const double d = norm(delta);
    const double r1 = c1.radius, r2 = c2.radius;
    const double scale = std::max({d, r1, r2});
    if (d == 0.0 || d > r1 + r2 + merge_eps * scale || d < std::abs(r1 - r2) - merge_eps * scale)
        return {};
    const double along = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
    const double h2 = r1 * r1 - along * along;
    const Point dir = delta / d;
    const Point base = c1.center + dir * along;
    if (h2 <= (merge_eps * scale) * (merge_eps * scale))
        return {base};
    const double h = std::sqrt(h2);
    std::vector<Point> out{base + perp(dir) * h, base - perp(dir) * h};
    std::sort(out.begin(), out.end(), [&](Point a, Point b) { return c1.theta_of(a) < c1.theta_of(b); });
    return out;
}

/// Exact test for p in the relative interior of segment ab.
inline bool on_open_segment(Point a, Point b, Point p)
{
    if (orient(a, b, p) != Sign::zero)
        return false;
    if (p == a || p == b)
        return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

/// True when the closed segments ab and cd share a point other than a
/// common endpoint.
inline bool segments_conflict(Point a, Point b, Point c, Point d)
{
    const Sign o1 = orient(a, b, c), o2 = orient(a, b, d);
    const Sign o3 = orient(c, d, a), o4 = orient(c, d, b);
    const bool shared = a == c || a == d || b == c || b == d;
    if (o1 != Sign::zero && o2 != Sign::zero && o3 != Sign::zero && o4 != Sign::zero)
        return o1 != o2 && o3 != o4;
    if (o1 == Sign::zero && o2 == Sign::zero) {
        // Collinear: overlap beyond a shared endpoint is a conflict.
        return on_open_segment(a, b, c) || on_open_segment(a, b, d) || on_open_segment(c, d, a) ||
               on_open_segment(c, d, b) || (a == c && b == d) || (a == d && b == c);
    }
    if (shared)
        return false;
    return on_open_segment(a, b, c) || on_open_segment(a, b, d) || on_open_segment(c, d, a) ||
           on_open_segment(c, d, b);
}

/// Signed area of a simple polygon (positive when counterclockwise).
inline double signed_area(const std::vector<Point>& poly)
{
    double a = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i)
        a += cross(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

inline Point polygon_centroid(const std::vector<Point>& poly)
{
    // Shift to the first vertex to limit cancellation.
    const Point o = poly.front();
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Point p = poly[i] - o;
        const Point q = poly[(i + 1) % n] - o;
        const double w = cross(p, q);
        a += w;
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    if (a == 0.0) {
        Point s{};
        for (Point p : poly)
            s = s + p;
        return s / static_cast<double>(poly.size());
    }
    return o + Point{cx / (3.0 * a), cy / (3.0 * a)};
}

/// Clip a convex polygon to the closed half-plane {x : dot(normal, x - origin) >= 0}.
inline std::vector<Point> clip_half_plane(const std::vector<Point>& poly, Point origin, Point normal)
{
    std::vector<Point> out;
    const std::size_t n = poly.size();
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Point p = poly[i];
        const Point q = poly[(i + 1) % n];
        const double sp = dot(normal, p - origin);
        const double sq = dot(normal, q - origin);
        if (sp >= 0.0)
            out.push_back(p);
        if ((sp >= 0.0) != (sq >= 0.0)) {
            const double t = sp / (sp - sq);
            out.push_back(p + (q - p) * t);
        }
    }
    return out;
}

/// Convex hull (counterclockwise, no collinear vertices) by monotone chain
/// with exact orientation tests.
inline std::vector<std::size_t> convex_hull_indices(const std::vector<Point>& pts)
{
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return pts[a].x < pts[b].x || (pts[a].x == pts[b].x && pts[a].y < pts[b].y);
    });
    if (idx.size() < 3)
        return idx;
    std::vector<std::size_t> hull(2 * idx.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        while (k >= 2 && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) != Sign::positive)
            --k;
        hull[k++] = idx[i];
    }
    for (std::size_t i = idx.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && orient(pts[hull[k - 2]], pts[hull[k - 1]], pts[idx[i]]) != Sign::positive)
            --k;
        hull[k++] = idx[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Exact test for q strictly inside a counterclockwise convex polygon.
inline bool strictly_inside_convex(const std::vector<Point>& poly, Point q)
{
    for (std::size_t i = 0, n = poly.size(); i < n; ++i)
        if (orient(poly[i], poly[(i + 1) % n], q) != Sign::positive)
            return false;
    return poly.size() >= 3;
}

/// Smallest signed distance from q to the edge lines of a counterclockwise
/// convex polygon; positive inside.
inline double inside_margin(const std::vector<Point>& poly, Point q)
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Point a = poly[i], b = poly[(i + 1) % n];
        m = std::min(m, cross(b - a, q - a) / distance(a, b));
    }
    return m;
}

} // namespace steiner

#endif // STEINER_GEOMETRY_HPP
