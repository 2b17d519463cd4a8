#ifndef STEINER_TOOLS_CLI_HPP
#define STEINER_TOOLS_CLI_HPP

#include "steiner/steiner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace steiner::cli {

enum Exit { ok = 0, io_failure = 1, degenerate = 2, internal_failure = 3 };

struct Options
{
    std::string input;
    std::string segments;
    std::string result;
    std::string svg;
    std::size_t resolution = 400;
    std::uint64_t seed = detail::default_seed;
    double jitter = 0;
    std::string format = "text";
    unsigned threads = 1;
    bool timings = false;
    bool compare = false;
    bool no_circles = false;
};

// Thrown with the violation listing when the input is not in general position.
struct degenerate_input
{
    std::vector<std::string> lines;
};

inline std::vector<std::string> violations_of(const ConstrainedInstance& inst)
{
    std::vector<std::string> out;
    if (inst.points.size() < 3) {
        out.push_back("too_few_points: " + std::to_string(inst.points.size()));
        return out;
    }
    for (const auto& v : general_position_check(inst.points))
        out.push_back(describe(v));
    if (out.empty()) {
        try {
            detail::validate_constraints(inst.points, inst.constraints);
        } catch (const precondition_error& e) {
            out.push_back(std::string("constraints: ") + e.what());
        }
    }
    return out;
}

/// Loads the instance. With --jitter, a degenerate point set is perturbed
/// by up to the given magnitude (seeded) until it is in general position.
inline ConstrainedInstance prepare(const Options& o, std::vector<std::string>& warnings)
{
    ConstrainedInstance inst = load_instance(o.input, o.segments);
    auto bad = violations_of(inst);
    if (bad.empty())
        return inst;
    if (o.jitter > 0 && inst.points.size() >= 3) {
        std::mt19937_64 rng(o.seed);
        std::uniform_real_distribution<double> u(-o.jitter, o.jitter);
        for (int attempt = 0; attempt < 64; ++attempt) {
            ConstrainedInstance moved = inst;
            for (Point& p : moved.points)
                p = p + Point{u(rng), u(rng)};
            if (violations_of(moved).empty()) {
                warnings.push_back("input jittered by at most " + format_significant(o.jitter, 6));
                return moved;
            }
        }
    }
    throw degenerate_input{std::move(bad)};
}

inline int cmd_optimize(const Options& o, std::ostream& out)
{
    std::vector<std::string> warnings;
    const ConstrainedInstance inst = prepare(o, warnings);
    OptimizeOptions opt;
    opt.threads = o.threads;
    opt.seed = o.seed;
    PlacementResult r = optimize(inst.points, inst.constraints, opt);
    r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
    if (o.format == "json")
        out << to_json(r, o.timings).dump(2) << '\n';
    else
        out << to_text(r, o.timings);
    return ok;
}

inline int cmd_oracle(const Options& o, std::ostream& out)
{
    std::vector<std::string> warnings;
    const ConstrainedInstance inst = prepare(o, warnings);
    const OracleResult g = grid_oracle(inst.points, inst.constraints, o.resolution, o.threads);
    std::optional<PlacementResult> alg;
    if (o.compare) {
        OptimizeOptions opt;
        opt.threads = o.threads;
        opt.seed = o.seed;
        alg = optimize(inst.points, inst.constraints, opt);
    }
    if (o.format == "json") {
        ordered_json doc;
        doc["resolution"] = o.resolution;
        doc["step"] = {g.step_x, g.step_y};
        doc["evaluations"] = g.evaluations;
        doc["found"] = g.found;
        if (g.found) {
            doc["point"] = {g.point.x, g.point.y};
            doc["value"] = angle_json(g.value);
        }
        if (alg) {
            doc["algorithm"] = {{"point", {alg->point.x, alg->point.y}}, {"value", angle_json(alg->value)}};
            if (g.found)
                doc["difference"] = angle_json(alg->value - g.value);
        }
        doc["warnings"] = warnings;
        out << doc.dump(2) << '\n';
        return ok;
    }
    out << "resolution = " << o.resolution << "\nstep = " << format_significant(g.step_x, 9) << ' '
        << format_significant(g.step_y, 9) << "\nevaluations = " << g.evaluations << '\n';
    if (g.found)
        out << "oracle_point = " << format_significant(g.point.x, 17) << ' ' << format_significant(g.point.y, 17)
            << "\noracle_value = " << format_angle(g.value) << '\n';
    else
        out << "oracle_value = none\n";
    if (alg) {
        out << "algorithm_point = " << format_significant(alg->point.x, 17) << ' '
            << format_significant(alg->point.y, 17) << "\nalgorithm_value = " << format_angle(alg->value) << '\n';
        if (g.found)
            out << "difference = " << format_angle(alg->value - g.value) << '\n';
    }
    for (const auto& w : warnings)
        out << "warning = " << w << '\n';
    return ok;
}

inline ordered_json metrics_json(const MetricsReport& r)
{
    ordered_json doc;
    const auto& s = r.stats;
    doc["v"] = s.v;
    doc["e"] = s.e;
    doc["f"] = s.f;
    doc["k"] = s.k;
    doc["d"] = s.d;
    doc["d_hull"] = s.d_hull;
    doc["d_bar"] = s.d_bar;
    doc["m"] = s.m;
    doc["X"] = s.X;
    doc["u"] = s.u;
    doc["e_dt"] = s.e_dt;
    doc["sum_x"] = r.sum_x;
    doc["sum_x_bound"] = r.sum_bound;
    doc["envelope_pieces"] = r.envelope_pieces;
    doc["max_crossings"] = r.max_crossings;
    doc["tangential"] = r.tangential;
    doc["delta_violations"] = r.delta_violations;
    if (r.state_changes)
        doc["state_changes"] = *r.state_changes;
    doc["inequalities_checked"] = r.checked;
    ordered_json circles = ordered_json::array();
    for (const auto& c : r.circles)
        circles.push_back({{"circle", c.circle},
                           {"f", c.f},
                           {"x", c.x},
                           {"d", c.d},
                           {"function_bound", c.function_bound},
                           {"crossing_depth", c.crossing_depth}});
    doc["circles"] = circles;
    doc["violations"] = r.violations();
    return doc;
}

inline int cmd_metrics(const Options& o, std::ostream& out)
{
    std::vector<std::string> warnings;
    const ConstrainedInstance inst = prepare(o, warnings);
    MetricsReport r = compute_metrics(inst, o.threads);
    if (o.format == "json") {
        ordered_json doc = metrics_json(r);
        if (o.timings) {
            doc["region_ms"] = r.region_ms;
            doc["boundary_ms"] = r.boundary_ms;
        }
        out << doc.dump(2) << '\n';
    } else {
        out << r.to_text();
    }
    return ok;
}

inline int cmd_render(const Options& o, std::ostream& out)
{
    std::vector<std::string> warnings;
    const ConstrainedInstance inst = prepare(o, warnings);
    const Triangulation t = build_cdt(inst.points, inst.constraints);
    std::optional<Point> marked;
    std::vector<TriangleId> hole;
    if (!o.result.empty()) {
        marked = read_result_point(detail::read_file(o.result));
        try {
            hole = constrained_invalid_set(inst, t, *marked);
        } catch (const error&) {
            // Point outside the hull or on an input point: draw it without a hole.
        }
    }
    SvgStyle style;
    style.circles = !o.no_circles;
    std::ofstream file(o.svg);
    if (!file)
        throw io_error("cannot write " + o.svg);
    file << render_svg(t, inst.constraints, marked, hole, style);
    if (!file)
        throw io_error("write failed: " + o.svg);
    out << "wrote " << o.svg << '\n';
    return ok;
}

/// Parses the command line and runs one subcommand. Returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Optimal Steiner point placement for max-min angle Delaunay triangulations"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* sub) {
        sub->add_option("input", o.input, "Points: `x y` per line, or JSON {points, segments}")->required();
        sub->add_option("--segments", o.segments, "Constraint segments: `i j` per line (0-based)");
        sub->add_option("--seed", o.seed, "Seed for triangulation order and jitter");
        sub->add_option("--jitter", o.jitter, "Perturb degenerate input by at most this much");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
    };

    auto* optimize_cmd = app.add_subcommand("optimize", "Best insertion point");
    common(optimize_cmd);
    optimize_cmd->add_flag("--timings", o.timings, "Include wall-clock timings");

    auto* oracle_cmd = app.add_subcommand("oracle", "Grid search reference");
    common(oracle_cmd);
    oracle_cmd->add_option("--resolution", o.resolution, "Grid cells per side")->check(CLI::Range(2, 1 << 20));
    oracle_cmd->add_flag("--compare", o.compare, "Also run the algorithm and print the difference");

    auto* metrics_cmd = app.add_subcommand("metrics", "Arrangement statistics and inequality checks");
    common(metrics_cmd);
    metrics_cmd->add_flag("--timings", o.timings, "Include search timings in JSON output");

    auto* render_cmd = app.add_subcommand("render", "SVG drawing of the triangulation and a result");
    common(render_cmd);
    render_cmd->add_option("result", o.result, "JSON result document from `optimize --format json`")->required();
    render_cmd->add_option("output", o.svg, "SVG file to write")->required();
    render_cmd->add_flag("--no-circles", o.no_circles, "Omit the Delaunay circles");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : io_failure;
    }

    try {
        if (*optimize_cmd)
            return cmd_optimize(o, out);
        if (*oracle_cmd)
            return cmd_oracle(o, out);
        if (*metrics_cmd)
            return cmd_metrics(o, out);
        return cmd_render(o, out);
    } catch (const degenerate_input& d) {
        err << "degenerate input:\n";
        for (const auto& line : d.lines)
            err << "  " << line << '\n';
        return degenerate;
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const degeneracy_error& e) {
        err << "degenerate input:\n  " << e.what() << '\n';
        return degenerate;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return internal_failure;
    }
}

} // namespace steiner::cli

#endif // STEINER_TOOLS_CLI_HPP
