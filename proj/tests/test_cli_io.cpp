#include "oracle.hpp"

#include <ssg/cli.hpp>
#include <ssg/dot.hpp>
#include <ssg/spec_format.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace ssg;
using json = nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(SSG_FIXTURES) + "/" + name + ".ssg"; }

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST(SpecParse, Fixtures) {
    SpecFile forest = parse_spec(read_file(fixture("forest")));
    EXPECT_EQ(forest.vertices.size(), 3u);
    EXPECT_EQ(forest.edges.size(), 6u);
    EXPECT_EQ(forest.generators.size(), 3u);
    EXPECT_EQ(forest.rules.size(), 6u);
    EXPECT_EQ(forest.rules[0].edge.text, "e1");
    EXPECT_EQ(forest.rules[0].image.text, "e2");
    EXPECT_EQ(forest.rules[4].restriction[0].name.text, "a");
    EXPECT_TRUE(forest.rules[4].restriction[0].inverted);

    SpecFile lamp = parse_spec(read_file(fixture("lamplighter")));
    bool found = false;
    for (const auto& r : lamp.rules) {
        found = found || (r.generator.text == "c" && r.edge.text == "e1" && r.image.text == "e3" &&
                          r.restriction.size() == 1 && r.restriction[0].name.text == "a");
    }
    EXPECT_TRUE(found);
}

TEST(SpecParse, LocationsAreRecorded) {
    SpecFile spec = parse_spec("# header\nvertices: u\n  edge e1: u -> u\n");
    EXPECT_EQ(spec.edges[0].id.line, 3u);
    EXPECT_EQ(spec.edges[0].id.column, 8u);
    EXPECT_EQ(spec.edges[0].range.column, 17u);
}

TEST(SpecParse, GrammarErrorsCarryLineAndColumn) {
    try {
        parse_spec("vertices: u\nedge e1 u -> u\n");
        FAIL() << "expected ParseError";
    } catch (const ParseError& err) {
        EXPECT_EQ(err.line(), 2u);
        EXPECT_EQ(err.column(), 9u);
        EXPECT_NE(std::string(err.what()).find("2:9: expected ':'"), std::string::npos);
    }
    EXPECT_THROW(parse_spec("vertex: u\n"), ParseError);
    EXPECT_THROW(parse_spec("vertices:\n"), ParseError);
    EXPECT_THROW(parse_spec("vertices: u\nrule a: e1 -> e2 |\n"), ParseError);
    EXPECT_THROW(parse_spec("vertices: u\nrule a: e1 -> e2 | a^-2\n"), ParseError);
    EXPECT_THROW(parse_spec("vertices: u\nedge e1: u -> u extra\n"), ParseError);
}

TEST(SpecParse, UnknownNamesAreSemanticErrors) {
    std::string text = read_file(fixture("forest")) + "rule a: e1 -> e9 | u\n";
    try {
        build_action(parse_spec(text));
        FAIL() << "expected SpecError";
    } catch (const SpecError& err) {
        ASSERT_EQ(err.problems().size(), 1u);
        EXPECT_NE(err.problems()[0].find("unknown edge e9"), std::string::npos);
        const auto line = std::count(text.begin(), text.end(), '\n');
        EXPECT_EQ(err.problems()[0].rfind(std::to_string(line) + ":15:", 0), 0u) << err.problems()[0];
    }
    EXPECT_THROW(build_action(parse_spec("vertices: u\nedge e: u -> z\n")), SpecError);
    EXPECT_THROW(build_action(parse_spec("vertices: u\nedge e: u -> u\ngenerator g: u -> u\nrule g: e -> e | h\n")),
                 SpecError);
}

TEST(SpecParse, SerializeRoundTrips) {
    for (const char* name : {"forest", "lamplighter", "bundle"}) {
        SelfSimilarAction a = oracle::load(name);
        std::string text = serialize_spec(a);
        SpecFile reparsed = parse_spec(text);
        EXPECT_EQ(reparsed, parse_spec(read_file(fixture(name)))) << name;
        EXPECT_EQ(serialize_spec(build_action(reparsed)), text);
    }
}

TEST(WordSyntax, Words) {
    auto a = oracle::load("forest");
    EXPECT_EQ(a.format(parse_word(a, "c b a")), "c b a");
    EXPECT_EQ(parse_word(a, "c.b.a"), parse_word(a, "c b a"));
    EXPECT_EQ(a.format(parse_word(a, "a^-1")), "a^-1");
    EXPECT_TRUE(parse_word(a, " w ").is_unit());
    EXPECT_THROW(parse_word(a, "q"), ParseError);
    EXPECT_THROW(parse_word(a, ""), ParseError);
}

TEST(WordSyntax, LinearCombinations) {
    auto a = oracle::load("forest");
    LinComb x = parse_lincomb(a, "1.0*a + 1.0*a^-1");
    EXPECT_EQ(x.size(), 2u);
    EXPECT_EQ(x.terms().at(parse_word(a, "a^-1")), Complex(1.0));

    LinComb y = parse_lincomb(a, "u - 0.5*c b + 2i*v + (1-0.25i)*w");
    EXPECT_EQ(y.terms().at(parse_word(a, "u")), Complex(1.0));
    EXPECT_EQ(y.terms().at(parse_word(a, "c b")), Complex(-0.5));
    EXPECT_EQ(y.terms().at(parse_word(a, "v")), Complex(0.0, 2.0));
    EXPECT_EQ(y.terms().at(parse_word(a, "w")), Complex(1.0, -0.25));

    LinComb z = parse_lincomb(a, "a - a");
    EXPECT_TRUE(z.empty());
    EXPECT_TRUE(parse_lincomb(a, "0").empty());
    EXPECT_EQ(parse_lincomb(a, format_lincomb(a, y)), y);
    EXPECT_EQ(parse_lincomb(a, "0.5*a + -1*b^-1").terms().at(parse_word(a, "b^-1")), Complex(-1.0));
    EXPECT_THROW(parse_lincomb(a, "2 a"), ParseError);
    EXPECT_THROW(parse_lincomb(a, "a +"), ParseError);
}

TEST(Dot, ForestAndBundle) {
    auto forest = oracle::load("forest");
    std::string d1 = export_dot(forest.graph(), 1);
    EXPECT_EQ(count(d1, "[label="), 9u);
    EXPECT_EQ(count(d1, " -> "), 6u);
    EXPECT_NE(d1.find("\"u\" -> \"e1\""), std::string::npos);
    EXPECT_NE(d1.find("\"w\" -> \"e5\""), std::string::npos);
    EXPECT_EQ(d1, export_dot(forest.graph(), 1));

    std::string d2 = export_dot(forest.graph(), 2);
    EXPECT_NE(d2.find("\"e2\" -> \"e2.e1\""), std::string::npos);

    auto bundle = oracle::load("bundle");
    std::string b1 = export_dot(bundle.graph(), 1);
    EXPECT_EQ(count(b1, "\"u\" -> "), 2u);
    EXPECT_EQ(count(b1, "\"v\" -> "), 3u);

    std::string d0 = export_dot(forest.graph(), 0);
    EXPECT_EQ(count(d0, "[label="), 3u);
    EXPECT_EQ(count(d0, " -> "), 0u);
}

TEST(Cli, MatrixDenseAndCoordinate) {
    CliRun r = run({"matrix", fixture("forest"), "--word", "a", "--level", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0,0,0\n1,0,0\n0,0,0\n");
    r = run({"matrix", fixture("forest"), "--word", "b", "--level", "1", "--format", "coo"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "4 3 1\n5 2 1\n");
}

TEST(Cli, TraceReport) {
    CliRun r = run({"trace", fixture("forest"), "--lincomb", "1*u"});
    ASSERT_EQ(r.code, 0) << r.err;
    json j = json::parse(r.out);
    EXPECT_TRUE(j["exact"].get<bool>());
    EXPECT_EQ(j["rational"]["re"], "1/3");
    EXPECT_NEAR(j["value"]["re"].get<double>(), 0.3333333333, 1e-10);
    EXPECT_EQ(j["convergence"], "exact");
    EXPECT_TRUE(j["cap"].is_null());

    r = run({"trace", fixture("forest"), "--lincomb", "1.0*a + 1.0*a^-1", "--max-level", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["rational"]["re"], "0");
}

TEST(Cli, TransitiveAndOrbits) {
    CliRun r = run({"transitive", fixture("bundle"), "--up-to", "3"});
    EXPECT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_FALSE(j["transitive"].get<bool>());
    EXPECT_EQ(j["note"], "verified to depth 3");
    for (const auto& level : j["levels"]) EXPECT_FALSE(level["transitive"].get<bool>());

    r = run({"orbits", fixture("bundle"), "--level", "1"});
    EXPECT_EQ(r.code, 0);
    j = json::parse(r.out);
    EXPECT_EQ(j["count"], 3);
    EXPECT_EQ(j["orbits"][0], json({"e1", "e2"}));
}

TEST(Cli, ValidateCheckNormRecursion) {
    CliRun r = run({"validate", fixture("forest"), "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(json::parse(r.out)["valid"].get<bool>());

    r = run({"check", fixture("lamplighter"), "--depth", "3", "--samples", "30", "--seed", "4"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(json::parse(r.out)["passed"].get<bool>());

    r = run({"check", fixture("bundle"), "--depth", "3", "--samples", "30"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["skipped"].size(), 2u);

    r = run({"norm", fixture("forest"), "--lincomb", "a", "--max-level", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NEAR(json::parse(r.out)["lower_bound"].get<double>(), 1.0, 1e-9);

    r = run({"recursion", fixture("forest"), "--word", "b"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("phi(b) = ([e2->e5 e6->e4], (a, c))"), std::string::npos) << r.out;

    r = run({"recursion", fixture("forest"), "--word", "a", "--iterate", "2", "--json"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["entries"][3][3], "0");
}

TEST(Cli, ExportDotToFile) {
    auto path = std::filesystem::temp_directory_path() / "ssg_cli_test_forest.dot";
    CliRun r = run({"export-dot", fixture("forest"), "--depth", "1", "-o", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(read_file(path.string()), export_dot(oracle::load("forest").graph(), 1));
    std::filesystem::remove(path);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"matrix", fixture("forest"), "--word", "a"}).code, 2);
    EXPECT_EQ(run({"matrix", fixture("forest"), "--word", "a", "--level", "0", "--bogus"}).code, 2);
    EXPECT_EQ(run({"validate", "/nonexistent/spec.ssg"}).code, 2);
    EXPECT_EQ(run({"matrix", fixture("forest"), "--word", "zz", "--level", "0"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);

    auto dir = std::filesystem::temp_directory_path();
    auto broken = dir / "ssg_cli_test_broken.ssg";
    {
        std::ofstream(broken) << "vertices: u\nedge e1 u -> u\n";
    }
    CliRun r = run({"validate", broken.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("2:9"), std::string::npos) << r.err;

    auto unknown = dir / "ssg_cli_test_unknown.ssg";
    {
        std::ofstream(unknown) << read_file(fixture("forest")) << "rule a: e1 -> e9 | u\n";
    }
    r = run({"validate", unknown.string()});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("unknown edge e9"), std::string::npos);

    auto invalid = dir / "ssg_cli_test_invalid.ssg";
    {
        std::ofstream(invalid) << std::regex_replace(read_file(fixture("forest")), std::regex("rule a: e3 -> e6 \\| b\n"), "");
    }
    r = run({"validate", invalid.string(), "--json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_FALSE(json::parse(r.out)["valid"].get<bool>());

    EXPECT_EQ(run({"trace", fixture("bundle"), "--lincomb", "a"}).code, 1);

    for (const auto& p : {broken, unknown, invalid}) std::filesystem::remove(p);
}

TEST(Cli, CapHitExitsThree) {
    auto path = std::filesystem::temp_directory_path() / "ssg_cli_test_half.ssg";
    {
        std::ofstream(path) << "vertices: o\nedge x: o -> o\nedge y: o -> o\nedge z: o -> o\n"
                               "generator g: o -> o\ngenerator k: o -> o\n"
                               "rule g: x -> x | g\nrule g: y -> y | o\nrule g: z -> z | k\n"
                               "rule k: x -> y | o\nrule k: y -> z | o\nrule k: z -> x | o\n";
    }
    CliRun r = run({"trace", path.string(), "--lincomb", "g", "--max-level", "3"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out)["rational"]["re"], "1/2");
    std::filesystem::remove(path);
}
