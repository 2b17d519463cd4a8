#include "cli.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace steiner {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() /
              ("steiner_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string file(const std::string& name, const std::string& content)
    {
        const fs::path p = dir / name;
        std::ofstream(p) << content;
        return p.string();
    }

    int run(std::vector<std::string> args)
    {
        args.insert(args.begin(), "steiner");
        std::vector<const char*> argv;
        for (const auto& a : args)
            argv.push_back(a.c_str());
        out.str({});
        err.str({});
        return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    }

    fs::path dir;
    std::ostringstream out, err;
};

const std::string equilateral = "0 0\n1 0\n0.5 0.8660254037844386\n";
const std::string two_triangles = "0 0\n1 0\n0.4 0.9\n0.6 -0.8\n";

// `name = value` lines of a text document.
std::map<std::string, std::string> key_values(const std::string& text)
{
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        const auto eq = line.find(" = ");
        if (eq != std::string::npos)
            kv.emplace(line.substr(0, eq), line.substr(eq + 3));
    }
    return kv;
}

TEST(Parsers, TextPointsSkipCommentsAndBlankLines)
{
    const auto pts = parse_points_text("# header\n0 0\n\n  1.5 -2e-3\n");
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1].x, 1.5);
    EXPECT_EQ(pts[1].y, -2e-3);
    EXPECT_THROW(parse_points_text("0 0 0\n"), io_error);
    EXPECT_THROW(parse_points_text("0 abc\n"), io_error);
    EXPECT_THROW(parse_points_text("0 nan\n"), io_error);
}

TEST(Parsers, SegmentsAndJson)
{
    const auto segs = parse_segments_text("0 2\n1 3\n");
    ASSERT_EQ(segs.segments.size(), 2u);
    EXPECT_EQ(segs.segments[1][1], 3u);
    EXPECT_THROW(parse_segments_text("0 -1\n"), io_error);
    const auto inst = parse_instance_json(R"({"points": [[0, 0], [1, 0], [0, 1]], "segments": [[0, 1]]})");
    EXPECT_EQ(inst.points.size(), 3u);
    ASSERT_EQ(inst.constraints.segments.size(), 1u);
    EXPECT_THROW(parse_instance_json(R"({"points": [[0, 0, 1]]})"), io_error);
    EXPECT_THROW(parse_instance_json("{"), io_error);
}

TEST_F(Cli, OptimizeEquilateralText)
{
    ASSERT_EQ(run({"optimize", file("eq.txt", equilateral)}), 0) << err.str();
    const auto kv = key_values(out.str());
    std::istringstream point(kv.at("point"));
    double x, y;
    point >> x >> y;
    EXPECT_NEAR(x, 0.5, 1e-4);
    EXPECT_NEAR(y, 0.2887, 1e-4);
    EXPECT_NEAR(std::stod(kv.at("value")), 0.5236, 1e-4);
    EXPECT_NE(kv.at("value").find("deg"), std::string::npos);
}

TEST_F(Cli, OptimizeJsonMatchesText)
{
    const std::string in = file("eq.txt", equilateral);
    ASSERT_EQ(run({"optimize", in}), 0);
    const auto kv = key_values(out.str());
    ASSERT_EQ(run({"optimize", in, "--format", "json"}), 0);
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_NEAR(doc["point"][0].get<double>(), 0.5, 1e-4);
    EXPECT_NEAR(doc["point"][1].get<double>(), 0.2887, 1e-4);
    EXPECT_NEAR(doc["value"]["radians"].get<double>(), std::stod(kv.at("value")), 1e-8);
}

TEST_F(Cli, CollinearInputExitsTwo)
{
    EXPECT_EQ(run({"optimize", file("line.txt", "0 0\n1 1\n2 2\n")}), 2);
    EXPECT_NE(err.str().find("collinear"), std::string::npos) << err.str();
}

TEST_F(Cli, MissingOrMalformedInputExitsOne)
{
    EXPECT_EQ(run({"optimize", (dir / "absent.txt").string()}), 1);
    EXPECT_EQ(run({"oracle", (dir / "absent.txt").string()}), 1);
    EXPECT_EQ(run({"optimize", file("bad.txt", "0 0\n1\n")}), 1);
    EXPECT_EQ(run({"optimize", file("eq.txt", equilateral), "--format", "yaml"}), 1);
}

TEST_F(Cli, CoarseOracleDoesNotBeatOptimize)
{
    const std::string in = file("pts.txt", "0 0\n10 0\n5 8\n5 3\n");
    ASSERT_EQ(run({"oracle", in, "--resolution", "2", "--compare", "--format", "json"}), 0) << err.str();
    const auto doc = nlohmann::json::parse(out.str());
    if (doc["found"].get<bool>()) {
        EXPECT_GE(doc["difference"]["radians"].get<double>(), -angle_eps);
    }
}

TEST_F(Cli, OracleCompareReportsDifference)
{
    ASSERT_EQ(run({"oracle", file("eq.txt", equilateral), "--resolution", "800", "--compare"}), 0);
    const auto kv = key_values(out.str());
    const double diff = std::stod(kv.at("difference"));
    EXPECT_GE(diff, -angle_eps);
    EXPECT_LE(diff, 1e-3);
}

TEST_F(Cli, MetricsCounts)
{
    ASSERT_EQ(run({"metrics", file("eq.txt", equilateral)}), 0) << err.str();
    auto kv = key_values(out.str());
    EXPECT_EQ(kv.at("k"), "3");
    EXPECT_EQ(kv.at("d"), "1");
    EXPECT_EQ(kv.at("m"), "1");
    ASSERT_EQ(run({"metrics", file("two.txt", two_triangles)}), 0) << err.str();
    kv = key_values(out.str());
    EXPECT_EQ(kv.at("k"), "10");
    ASSERT_EQ(run({"metrics", file("two.txt", two_triangles), "--format", "json"}), 0);
    EXPECT_EQ(nlohmann::json::parse(out.str())["k"].get<int>(), 10);
}

TEST_F(Cli, RenderWritesWellFormedSvg)
{
    const std::string in = file("two.txt", two_triangles);
    ASSERT_EQ(run({"optimize", in, "--format", "json"}), 0);
    const std::string result = file("result.json", out.str());
    const std::string svg = (dir / "out.svg").string();
    ASSERT_EQ(run({"render", in, result, svg}), 0) << err.str();
    boost::property_tree::ptree tree;
    ASSERT_NO_THROW(boost::property_tree::read_xml(svg, tree));
    std::size_t marked = 0;
    std::function<void(const boost::property_tree::ptree&)> walk = [&](const boost::property_tree::ptree& node) {
        for (const auto& [name, child] : node) {
            if (name == "<xmlattr>") {
                if (child.get<std::string>("class", "") == "marked")
                    ++marked;
                continue;
            }
            walk(child);
        }
    };
    walk(tree);
    EXPECT_EQ(marked, 1u);
    EXPECT_EQ(run({"render", in, (dir / "absent.json").string(), svg}), 1);
}

TEST_F(Cli, JsonOutputIsDeterministic)
{
    const std::string in = file("pts.txt", "0 0\n10 0\n5 8\n5 3\n2 6\n8 5.5\n");
    ASSERT_EQ(run({"optimize", in, "--format", "json", "--seed", "7"}), 0);
    const std::string first = out.str();
    ASSERT_EQ(run({"optimize", in, "--format", "json", "--seed", "7"}), 0);
    EXPECT_EQ(out.str(), first);
}

TEST_F(Cli, ResultRoundTripsThroughEvaluation)
{
    const std::string text = "0 0\n10 0\n5 8\n5 3\n2 6\n8 5.5\n";
    ASSERT_EQ(run({"optimize", file("pts.txt", text), "--format", "json"}), 0);
    const Point p = read_result_point(out.str());
    const auto doc = nlohmann::json::parse(out.str());
    EXPECT_NEAR(evaluate_insertion(parse_points_text(text), {}, p), doc["value"]["radians"].get<double>(), 1e-9);
}

TEST_F(Cli, JitterRepairsCocircularInput)
{
    const std::string square = file("sq.txt", "0 0\n1 0\n1 1\n0 1\n");
    EXPECT_EQ(run({"optimize", square}), 2);
    ASSERT_EQ(run({"optimize", square, "--jitter", "1e-6", "--seed", "3"}), 0) << err.str();
    EXPECT_NE(out.str().find("warning = input jittered"), std::string::npos);
}

TEST_F(Cli, SegmentsFileSelectsConstrainedSearch)
{
    const std::string in = file("sq.txt", "0 0\n1 0.013\n1.02 1\n-0.01 0.98\n");
    ASSERT_EQ(run({"optimize", in, "--segments", file("seg.txt", "0 2\n")}), 0) << err.str();
    EXPECT_EQ(key_values(out.str()).at("constrained"), "yes");
    EXPECT_EQ(run({"optimize", in, "--segments", file("bad.txt", "0 9\n")}), 1);
}

} // namespace
} // namespace steiner
