#ifndef STEINER_IO_HPP
#define STEINER_IO_HPP

#include "steiner/constrained.hpp"
#include "steiner/errors.hpp"
#include "steiner/optimize.hpp"
#include "steiner/triangulation.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace steiner {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool looks_like_json(const std::string& text)
{
    for (char c : text) {
        if (c == '{')
            return true;
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    }
    return false;
}

// Numeric lines with exactly `width` fields; blank lines and lines starting
// with '#' are skipped.
inline std::vector<std::vector<std::string>> numeric_rows(const std::string& text, std::size_t width,
                                                          const std::string& what)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        std::vector<std::string> row;
        for (std::string f; fields >> f;)
            row.push_back(f);
        if (row.size() != width)
            throw io_error(what + " line " + std::to_string(number) + ": expected " + std::to_string(width) +
                           " fields");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline double parse_double(const std::string& s)
{
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw io_error("not a number: " + s);
    }
    if (used != s.size() || !std::isfinite(v))
        throw io_error("not a finite number: " + s);
    return v;
}

inline VertexId parse_index(const std::string& s)
{
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw io_error("not a vertex index: " + s);
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw io_error("vertex index out of range: " + s);
    }
}

} // namespace detail

/// One `x y` pair per line.
inline std::vector<Point> parse_points_text(const std::string& text)
{
    std::vector<Point> out;
    for (const auto& row : detail::numeric_rows(text, 2, "points"))
        out.push_back({detail::parse_double(row[0]), detail::parse_double(row[1])});
    return out;
}

/// One `i j` pair of 0-based point indices per line.
inline ConstraintSet parse_segments_text(const std::string& text)
{
    ConstraintSet out;
    for (const auto& row : detail::numeric_rows(text, 2, "segments"))
        out.segments.push_back({detail::parse_index(row[0]), detail::parse_index(row[1])});
    return out;
}

/// {"points": [[x, y], ...], "segments": [[i, j], ...]}; segments optional.
inline ConstrainedInstance parse_instance_json(const std::string& text)
{
    ConstrainedInstance inst;
    try {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& p : doc.at("points")) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                throw io_error("points must be [x, y] pairs");
            inst.points.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        if (doc.contains("segments"))
            for (const auto& s : doc.at("segments")) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned())
                    throw io_error("segments must be [i, j] index pairs");
                inst.constraints.segments.push_back({s[0].get<VertexId>(), s[1].get<VertexId>()});
            }
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("malformed JSON input: ") + e.what());
    }
    return inst;
}

/// Reads a text or JSON instance; a separate segments file is added to any
/// segments the instance already carries.
inline ConstrainedInstance load_instance(const std::string& path, const std::string& segments_path = {})
{
    const std::string text = detail::read_file(path);
    ConstrainedInstance inst;
    if (detail::looks_like_json(text))
        inst = parse_instance_json(text);
    else
        inst.points = parse_points_text(text);
    if (!segments_path.empty()) {
        const ConstraintSet extra = parse_segments_text(detail::read_file(segments_path));
        inst.constraints.segments.insert(inst.constraints.segments.end(), extra.segments.begin(),
                                         extra.segments.end());
    }
    for (const auto& s : inst.constraints.segments)
        if (s[0] >= inst.points.size() || s[1] >= inst.points.size())
            throw io_error("segment index out of range");
    return inst;
}

/// printf-style %.*g.
inline std::string format_significant(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

/// Angles in radians (9 significant digits) and degrees (6).
inline std::string format_angle(double radians)
{
    return format_significant(radians, 9) + " rad (" + format_significant(degrees(radians), 6) + " deg)";
}

inline ordered_json angle_json(double radians)
{
    return {{"radians", radians}, {"degrees", degrees(radians)}};
}

/// Result document. Timings are left out unless asked for, so that equal
/// inputs give byte-identical output.
inline ordered_json to_json(const PlacementResult& r, bool timings = false)
{
    ordered_json doc;
    doc["point"] = {r.point.x, r.point.y};
    doc["value"] = angle_json(r.value);
    doc["verified_value"] = angle_json(r.verified_value);
    doc["baseline"] = angle_json(r.baseline);
    if (r.provenance == Provenance::cell)
        doc["provenance"] = {{"kind", "cell"}, {"face", r.face}};
    else
        doc["provenance"] = {{"kind", "circle"}, {"circle", r.circle}, {"theta", r.theta}};
    doc["constrained"] = r.constrained;
    ordered_json diag;
    diag["k"] = r.stats.k;
    diag["d"] = r.stats.d;
    diag["d_hull"] = r.stats.d_hull;
    diag["circles"] = r.stats.m;
    diag["faces"] = r.stats.f;
    diag["holes_solved"] = r.holes_solved;
    if (r.constrained)
        diag["state_changes"] = r.state_changes;
    doc["diagnostics"] = diag;
    doc["warnings"] = r.warnings;
    if (timings)
        doc["timings_ms"] = {{"triangulate", r.timings.triangulate_ms},
                             {"arrangement", r.timings.arrangement_ms},
                             {"region", r.timings.region_ms},
                             {"boundary", r.timings.boundary_ms},
                             {"total", r.timings.total_ms}};
    return doc;
}

inline std::string to_text(const PlacementResult& r, bool timings = false)
{
    std::ostringstream os;
    os << "point = " << format_significant(r.point.x, 17) << ' ' << format_significant(r.point.y, 17) << '\n'
       << "value = " << format_angle(r.value) << '\n'
       << "verified_value = " << format_angle(r.verified_value) << '\n'
       << "baseline = " << format_angle(r.baseline) << '\n';
    if (r.provenance == Provenance::cell)
        os << "provenance = cell " << r.face << '\n';
    else
        os << "provenance = circle " << r.circle << " theta " << format_significant(r.theta, 9) << '\n';
    os << "constrained = " << (r.constrained ? "yes" : "no") << '\n'
       << "k = " << r.stats.k << "\nd = " << r.stats.d << "\nd_hull = " << r.stats.d_hull
       << "\ncircles = " << r.stats.m << "\nfaces = " << r.stats.f << "\nholes_solved = " << r.holes_solved
       << '\n';
    if (r.constrained)
        os << "state_changes = " << r.state_changes << '\n';
    for (const auto& w : r.warnings)
        os << "warning = " << w << '\n';
    if (timings)
        os << "triangulate_ms = " << r.timings.triangulate_ms << "\narrangement_ms = " << r.timings.arrangement_ms
           << "\nregion_ms = " << r.timings.region_ms << "\nboundary_ms = " << r.timings.boundary_ms
           << "\ntotal_ms = " << r.timings.total_ms << '\n';
    return os.str();
}

/// The `point` of a result document.
inline Point read_result_point(const std::string& text)
{
    try {
        const auto doc = nlohmann::json::parse(text);
        const auto& p = doc.at("point");
        if (!p.is_array() || p.size() != 2)
            throw io_error("result point must be [x, y]");
        return {p[0].get<double>(), p[1].get<double>()};
    } catch (const nlohmann::json::exception& e) {
        throw io_error(std::string("malformed result document: ") + e.what());
    }
}

struct SvgStyle
{
    double width = 800;
    double margin = 20;
    bool circles = true;
};

/// SVG 1.1 drawing with one group per layer: hole, circles, edges,
/// segments, points and the inserted point.
inline std::string render_svg(const Triangulation& t, const ConstraintSet& constraints,
                              const std::optional<Point>& marked, const std::vector<TriangleId>& hole,
                              const SvgStyle& style = {})
{
    const auto& pts = t.vertices();
    double lo_x = pts[0].x, hi_x = lo_x, lo_y = pts[0].y, hi_y = lo_y;
    for (Point p : pts) {
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
    const double s = (style.width - 2 * style.margin) / span;
    const double height = (hi_y - lo_y) * s + 2 * style.margin;
    auto X = [&](double x) { return format_significant((x - lo_x) * s + style.margin, 10); };
    auto Y = [&](double y) { return format_significant((hi_y - y) * s + style.margin, 10); };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << format_significant(style.width, 10)
       << "\" height=\"" << format_significant(height, 10) << "\" viewBox=\"0 0 "
       << format_significant(style.width, 10) << ' ' << format_significant(height, 10) << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    os << "<g id=\"hole\" fill=\"#f6d68b\" stroke=\"none\">\n";
    for (TriangleId i : hole) {
        const auto [a, b, c] = t.corners(i);
        os << "<polygon points=\"" << X(a.x) << ',' << Y(a.y) << ' ' << X(b.x) << ',' << Y(b.y) << ' ' << X(c.x)
           << ',' << Y(c.y) << "\"/>\n";
    }
    os << "</g>\n";

    os << "<g id=\"circles\" fill=\"none\" stroke=\"#9ab\" stroke-width=\"0.5\">\n";
    if (style.circles)
        for (const auto& dc : delaunay_circles(t))
            os << "<circle cx=\"" << X(dc.circle.center.x) << "\" cy=\"" << Y(dc.circle.center.y) << "\" r=\""
               << format_significant(dc.circle.radius * s, 10) << "\"/>\n";
    os << "</g>\n";

    os << "<g id=\"edges\" stroke=\"#333\" stroke-width=\"1\">\n";
    for (const Edge& e : t.edges())
        os << "<line x1=\"" << X(pts[e.a].x) << "\" y1=\"" << Y(pts[e.a].y) << "\" x2=\"" << X(pts[e.b].x)
           << "\" y2=\"" << Y(pts[e.b].y) << "\"/>\n";
    os << "</g>\n";

    os << "<g id=\"segments\" stroke=\"#c22\" stroke-width=\"2.5\">\n";
    for (const auto& seg : constraints.segments)
        os << "<line x1=\"" << X(pts[seg[0]].x) << "\" y1=\"" << Y(pts[seg[0]].y) << "\" x2=\"" << X(pts[seg[1]].x)
           << "\" y2=\"" << Y(pts[seg[1]].y) << "\"/>\n";
    os << "</g>\n";

    os << "<g id=\"points\" fill=\"black\">\n";
    for (Point p : pts)
        os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y) << "\" r=\"3\"/>\n";
    os << "</g>\n";

    os << "<g id=\"inserted\" fill=\"#1a4\" stroke=\"black\">\n";
    if (marked)
        os << "<circle class=\"marked\" cx=\"" << X(marked->x) << "\" cy=\"" << Y(marked->y) << "\" r=\"5\"/>\n";
    os << "</g>\n</svg>\n";
    return os.str();
}

} // namespace steiner

#endif // STEINER_IO_HPP
