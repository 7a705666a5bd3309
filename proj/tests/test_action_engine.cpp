#include "oracle.hpp"

#include <ssg/action.hpp>
#include <ssg/properties.hpp>
#include <ssg/sampling.hpp>
#include <ssg/spec_format.hpp>

#include <gtest/gtest.h>

#include <regex>
#include <set>

using namespace ssg;

namespace {

const char* const kFixtures[] = {"forest", "lamplighter", "bundle"};

std::string fixture_text(const std::string& name) {
    return read_file(std::string(SSG_FIXTURES) + "/" + name + ".ssg");
}

std::vector<Violation> violations_for(const std::string& text) {
    try {
        build_action(parse_spec(text));
    } catch (const ValidationError& err) {
        return err.violations();
    }
    return {};
}

bool mentions(const std::vector<Violation>& vs, const std::string& needle) {
    for (const auto& v : vs) {
        if (v.to_string().find(needle) != std::string::npos) return true;
    }
    return false;
}

EdgeIndex edge(const SelfSimilarAction& a, const char* id) { return *a.graph().find_edge(id); }

Path path(const SelfSimilarAction& a, std::initializer_list<const char*> ids) {
    Path p;
    for (const char* id : ids) p.edges.push_back(edge(a, id));
    p.range = a.graph().range(p.edges.front());
    return p;
}

Path concat(const Path& a, const Path& b) {
    Path out = a;
    out.edges.insert(out.edges.end(), b.edges.begin(), b.edges.end());
    return out;
}

}  // namespace

TEST(Word, FreeReductionAndInverse) {
    auto a = oracle::load("forest");
    Word w = parse_word(a, "a a^-1 c b b^-1");
    EXPECT_EQ(a.format(w), "c");
    Word x = parse_word(a, "c b a");
    EXPECT_EQ(a.format(x.inverse()), "a^-1 b^-1 c^-1");
    EXPECT_TRUE((x.inverse() * x).is_unit());
    EXPECT_EQ((x.inverse() * x).domain(), *a.graph().find_vertex("u"));
    EXPECT_EQ(x.inverse().inverse(), x);
}

TEST(Word, CompositionIsTypeChecked) {
    auto a = oracle::load("forest");
    Word wa = parse_word(a, "a");
    Word wb = parse_word(a, "b");
    EXPECT_NO_THROW(wb * wa);
    EXPECT_THROW(wa * wb, CompositionError);
    EXPECT_THROW(a.word({Token::forward(0), Token::forward(1)}), CompositionError);
    EXPECT_THROW(parse_word(a, "a b"), CompositionError);
    Word u = parse_word(a, "u");
    EXPECT_TRUE(u.is_unit());
    EXPECT_EQ(wa * u, wa);
}

TEST(Validation, FixturesAreValid) {
    for (const char* name : kFixtures) EXPECT_NO_THROW(oracle::load(name)) << name;
}

TEST(Validation, MissingRuleIsReported) {
    std::string text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e3 -> e6 \\| b\n"), "");
    auto vs = violations_for(text);
    ASSERT_FALSE(vs.empty());
    EXPECT_TRUE(mentions(vs, "row not total on uE^1")) << vs.front().to_string();
    EXPECT_TRUE(mentions(vs, "missing e3"));
}

TEST(Validation, RestrictionTypeMismatch) {
    std::string text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e3 -> e6 \\| b"), "rule a: e3 -> e6 | c");
    auto vs = violations_for(text);
    EXPECT_TRUE(mentions(vs, "d(c)=w != s(e3)=v"));
}

TEST(Validation, RestrictionUnitMismatch) {
    std::string text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e1 -> e2 \\| u"), "rule a: e1 -> e2 | b");
    EXPECT_FALSE(violations_for(text).empty());
    text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e1 -> e2 \\| u"), "rule a: e1 -> e2 | v");
    EXPECT_FALSE(violations_for(text).empty());
}

TEST(Validation, ImageOutsideTargetFiberAndNonBijective) {
    std::string text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e3 -> e6"), "rule a: e3 -> e4");
    EXPECT_FALSE(violations_for(text).empty());
    text = std::regex_replace(fixture_text("forest"), std::regex("rule a: e3 -> e6"), "rule a: e3 -> e2");
    EXPECT_TRUE(mentions(violations_for(text), "not bijective"));
}

TEST(Validation, DuplicateRuleAndForeignEdge) {
    std::string text = fixture_text("forest") + "rule a: e1 -> e2 | u\n";
    EXPECT_FALSE(violations_for(text).empty());
    text = fixture_text("forest") + "rule a: e2 -> e2 | u\n";
    EXPECT_FALSE(violations_for(text).empty());
}

TEST(Validation, FiberSizesMustMatch) {
    const char* text = R"(vertices: u v
edge e1: u -> u
edge e2: u -> u
edge e3: v -> v
edge e4: u -> v
edge e5: v -> v
generator g: u -> v
rule g: e1 -> e3 | u
rule g: e2 -> e4 | u
)";
    EXPECT_TRUE(mentions(violations_for(text), "differ in size"));
}

TEST(Action, ForestEdgeExamples) {
    auto a = oracle::load("forest");
    const Graph& g = a.graph();
    EdgeAction r = act_edge(a, parse_word(a, "a"), edge(a, "e1"));
    EXPECT_EQ(r.image, edge(a, "e2"));
    EXPECT_EQ(r.restriction, Word::unit(*g.find_vertex("u")));

    r = act_edge(a, parse_word(a, "a"), edge(a, "e3"));
    EXPECT_EQ(r.image, edge(a, "e6"));
    EXPECT_EQ(a.format(r.restriction), "b");

    r = act_edge(a, parse_word(a, "a^-1"), edge(a, "e6"));
    EXPECT_EQ(r.image, edge(a, "e3"));
    EXPECT_EQ(a.format(r.restriction), "b^-1");

    r = act_edge(a, parse_word(a, "b a"), edge(a, "e1"));
    EXPECT_EQ(r.image, edge(a, "e5"));
    EXPECT_EQ(a.format(r.restriction), "a");

    EXPECT_THROW(act_edge(a, parse_word(a, "a"), edge(a, "e2")), CompositionError);
}

TEST(Action, ForestPathExamples) {
    auto a = oracle::load("forest");
    EXPECT_EQ(apply(a, parse_word(a, "a"), path(a, {"e1", "e1"})), path(a, {"e2", "e1"}));
    PathAction r = act_path(a, parse_word(a, "a"), path(a, {"e3"}));
    EXPECT_EQ(r.image, path(a, {"e6"}));
    EXPECT_EQ(a.format(r.restriction), "b");

    Word u = parse_word(a, "u");
    for (const auto& xi : oracle::paths(a.graph(), 4)) {
        if (xi.range != u.domain()) continue;
        EXPECT_EQ(apply(a, u, xi), xi);
    }
}

TEST(Action, PathActionMatchesRuleTableOracle) {
    for (const char* name : kFixtures) {
        auto a = oracle::load(name);
        auto words = all_words(a, 3);
        for (std::size_t n = 0; n <= 4; ++n) {
            for (const auto& xi : oracle::paths(a.graph(), n)) {
                for (const auto& w : words) {
                    if (w.domain() != xi.range) continue;
                    auto expected = oracle::act(a, w, xi);
                    ASSERT_TRUE(expected.has_value());
                    EXPECT_EQ(apply(a, w, xi), *expected) << name << " " << a.format(w) << " on " << a.format(xi);
                }
            }
        }
    }
}

// w.(xi eta) = (w.xi)(w|_xi . eta), with both sides evaluated by the oracle.
TEST(Action, RestrictionsAgreeWithOracleSplitting) {
    for (const char* name : kFixtures) {
        auto a = oracle::load(name);
        Sampler rng(17);
        for (int sample = 0; sample < 60; ++sample) {
            Word w = random_word(a, rng, 5);
            Path xi = random_path(a.graph(), rng, w.domain(), rng.between(1, 3));
            Word rest = restrict_path(a, w, xi);
            EXPECT_EQ(rest.domain(), a.graph().source(xi));
            for (std::size_t k = 0; k <= 3; ++k) {
                Path eta = random_path(a.graph(), rng, a.graph().source(xi), k);
                auto whole = oracle::act(a, w, concat(xi, eta));
                auto head = oracle::act(a, w, xi);
                auto tail = oracle::act(a, rest, eta);
                ASSERT_TRUE(whole && head && tail);
                EXPECT_EQ(*whole, concat(*head, *tail)) << name << " " << a.format(w);
            }
        }
    }
}

TEST(Identity, Examples) {
    auto a = oracle::load("forest");
    EXPECT_EQ(is_identity(a, parse_word(a, "u")).verdict, Verdict::True);

    IdentityResult r = is_identity(a, parse_word(a, "a"));
    EXPECT_EQ(r.verdict, Verdict::False);
    ASSERT_TRUE(r.witness && r.witness_image);
    EXPECT_EQ(*r.witness, path(a, {"e1"}));
    EXPECT_EQ(*r.witness_image, path(a, {"e2"}));

    r = is_identity(a, parse_word(a, "c b"));
    EXPECT_EQ(r.verdict, Verdict::False);
    EXPECT_EQ(*r.witness, path(a, {"e2"}));
    EXPECT_EQ(*r.witness_image, path(a, {"e6"}));
}

TEST(Identity, WordsEqualExamples) {
    auto forest = oracle::load("forest");
    Word rest = act_edge(forest, parse_word(forest, "a"), edge(forest, "e3")).restriction;
    EXPECT_EQ(words_equal(forest, rest, parse_word(forest, "b")).verdict, Verdict::True);
    EXPECT_EQ(words_equal(forest, parse_word(forest, "a"), parse_word(forest, "a")).verdict, Verdict::True);
    EXPECT_EQ(words_equal(forest, parse_word(forest, "a"), parse_word(forest, "c^-1")).verdict, Verdict::False);

    auto lamp = oracle::load("lamplighter");
    IdentityResult r = words_equal(lamp, parse_word(lamp, "a"), parse_word(lamp, "b"));
    EXPECT_EQ(r.verdict, Verdict::False);
    ASSERT_TRUE(r.witness);
    EXPECT_EQ(*r.witness, path(lamp, {"e1"}));
    EXPECT_EQ(*r.witness_image, path(lamp, {"e2"}));
}

TEST(Identity, VerdictsAreConsistentWithOracle) {
    for (const char* name : kFixtures) {
        auto a = oracle::load(name);
        for (const auto& w : all_words(a, 5)) {
            IdentityResult r = is_identity(a, w);
            ASSERT_NE(r.verdict, Verdict::Unknown) << name << " " << a.format(w);
            Word unit = Word::unit(w.domain());
            if (r.verdict == Verdict::True) {
                EXPECT_TRUE(oracle::agree_to_depth(a, w, unit, 6)) << name << " " << a.format(w);
            } else {
                ASSERT_TRUE(r.witness.has_value());
                auto moved = oracle::act(a, w, *r.witness);
                ASSERT_TRUE(moved.has_value());
                EXPECT_NE(*moved, *r.witness) << name << " " << a.format(w);
                EXPECT_EQ(*moved, *r.witness_image);
            }
        }
    }
}

TEST(Identity, NontrivialRelationAndCaps) {
    // s swaps the loops and t fixes them, each restricting to the other, so s s and t t act trivially.
    const char* text = R"(vertices: o
edge x: o -> o
edge y: o -> o
generator s: o -> o
generator t: o -> o
rule s: x -> y | t
rule s: y -> x | t
rule t: x -> x | s
rule t: y -> y | s
)";
    auto a = build_action(parse_spec(text));
    Word ss = parse_word(a, "s s");
    IdentityResult r = is_identity(a, ss);
    EXPECT_EQ(r.verdict, Verdict::True);
    EXPECT_EQ(r.states_explored, 2u);
    EXPECT_EQ(words_equal(a, parse_word(a, "s"), parse_word(a, "s^-1")).verdict, Verdict::True);
    EXPECT_EQ(words_equal(a, parse_word(a, "s"), parse_word(a, "t")).verdict, Verdict::False);

    r = is_identity(a, ss, SearchCaps{1, 100});
    EXPECT_EQ(r.verdict, Verdict::Unknown);
    EXPECT_EQ(r.cap_name, "state_cap");
    EXPECT_EQ(r.cap_value, 1u);
    EXPECT_THROW(is_identity(a, ss, SearchCaps{0, 1}), PreconditionError);
}

TEST(Properties, FixturesPassSampledChecks) {
    for (auto [name, depth] : {std::pair{"forest", 4}, std::pair{"lamplighter", 5}, std::pair{"bundle", 4}}) {
        auto a = oracle::load(name);
        CheckReport report = check_properties(a, depth, 200, 7);
        EXPECT_TRUE(report.passed()) << name << ": " << (report.failures.empty() ? "" : report.failures.front());
        EXPECT_EQ(report.unknown, 0u);
        EXPECT_GT(report.checks, 200u);
    }
}

TEST(Sampling, DeterministicForSeed) {
    auto a = oracle::load("forest");
    Sampler r1(99);
    Sampler r2(99);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(random_word(a, r1, 6), random_word(a, r2, 6));
}

TEST(Sampling, AllWordsAreReducedAndComposable) {
    auto a = oracle::load("lamplighter");
    auto words = all_words(a, 4);
    std::set<Word> unique(words.begin(), words.end());
    EXPECT_EQ(unique.size(), words.size());
    for (const auto& w : words) {
        EXPECT_GE(w.length(), 1u);
        EXPECT_LE(w.length(), 4u);
        EXPECT_NO_THROW(a.word(w.tokens()));
    }
}
