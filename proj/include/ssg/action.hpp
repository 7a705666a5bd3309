#pragma once

#include <ssg/error.hpp>
#include <ssg/graph.hpp>
#include <ssg/word.hpp>

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ssg {

/**
 * One row entry of a rule table: g . edge = image, g|_edge = restriction.
 * The restriction is written left to right; an empty token list stands for
 * the unit at `restriction_unit`.
 */
struct RuleDecl {
    GeneratorIndex generator = 0;
    EdgeIndex edge = 0;
    EdgeIndex image = 0;
    std::vector<Token> restriction;
    VertexIndex restriction_unit = 0;
};

struct Violation {
    std::string generator;
    std::string edge;
    std::string message;

    std::string to_string() const {
        std::string where = generator.empty() ? std::string() : "generator " + generator;
        if (!edge.empty()) where += (where.empty() ? "" : ", ") + std::string("edge ") + edge;
        return where.empty() ? message : where + ": " + message;
    }
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations)
        : Error(summarize(violations)), violations_(std::move(violations)) {}

    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    static std::string summarize(const std::vector<Violation>& violations) {
        std::string msg = "invalid self-similar action";
        for (const auto& v : violations) msg += "\n  " + v.to_string();
        return msg;
    }

    std::vector<Violation> violations_;
};

/// Checks that every rule row is total and bijective and every restriction is well typed.
inline std::vector<Violation> validate_action(const Graph& graph, std::span<const GeneratorDecl> gens,
                                              std::span<const RuleDecl> rules) {
    std::vector<Violation> out;
    auto vname = [&](VertexIndex v) { return graph.vertex_id(v); };
    auto ename = [&](EdgeIndex e) { return graph.edge(e).id; };

    for (const auto& g : gens) {
        if (g.domain >= graph.vertex_count() || g.target >= graph.vertex_count()) {
            out.push_back({g.id, "", "domain or target is not a graph vertex"});
        }
    }
    if (!out.empty()) return out;

    std::vector<std::vector<std::optional<EdgeIndex>>> images(gens.size(),
                                                              std::vector<std::optional<EdgeIndex>>(graph.edge_count()));
    for (const auto& rule : rules) {
        if (rule.generator >= gens.size()) {
            out.push_back({"#" + std::to_string(rule.generator), "", "unknown generator"});
            continue;
        }
        const auto& g = gens[rule.generator];
        if (rule.edge >= graph.edge_count() || rule.image >= graph.edge_count()) {
            out.push_back({g.id, "", "unknown edge index"});
            continue;
        }
        const std::string e = ename(rule.edge);
        if (graph.range(rule.edge) != g.domain) {
            out.push_back({g.id, e, "edge is not in d(" + g.id + ")E^1 = " + vname(g.domain) + "E^1"});
            continue;
        }
        if (graph.range(rule.image) != g.target) {
            out.push_back({g.id, e, "image " + ename(rule.image) + " is not in t(" + g.id + ")E^1 = " +
                                        vname(g.target) + "E^1"});
            continue;
        }
        if (images[rule.generator][rule.edge]) {
            out.push_back({g.id, e, "duplicate rule"});
            continue;
        }
        images[rule.generator][rule.edge] = rule.image;

        VertexIndex need_d = graph.source(rule.edge);
        VertexIndex need_t = graph.source(rule.image);
        if (rule.restriction.empty()) {
            if (rule.restriction_unit >= graph.vertex_count()) {
                out.push_back({g.id, e, "restriction unit is not a vertex"});
            } else if (rule.restriction_unit != need_d || rule.restriction_unit != need_t) {
                out.push_back({g.id, e, "restriction unit " + vname(rule.restriction_unit) + " does not match s(" + e +
                                            ")=" + vname(need_d) + " and s(" + ename(rule.image) +
                                            ")=" + vname(need_t)});
            }
            continue;
        }
        bool known = true;
        for (Token t : rule.restriction) known = known && t.generator() < gens.size();
        if (!known) {
            out.push_back({g.id, e, "restriction uses an unknown generator"});
            continue;
        }
        try {
            Word w = make_word(gens, rule.restriction);
            if (w.domain() != need_d) {
                out.push_back({g.id, e, "restriction domain d(" + format_word(graph, gens, w) + ")=" +
                                            vname(w.domain()) + " != s(" + e + ")=" + vname(need_d)});
            }
            if (w.target() != need_t) {
                out.push_back({g.id, e, "restriction target t(" + format_word(graph, gens, w) + ")=" +
                                            vname(w.target()) + " != s(" + ename(rule.image) + ")=" + vname(need_t)});
            }
        } catch (const CompositionError& err) {
            out.push_back({g.id, e, std::string("restriction is not composable: ") + err.what()});
        }
    }

    for (GeneratorIndex gi = 0; gi < gens.size(); ++gi) {
        const auto& g = gens[gi];
        std::vector<std::string> missing;
        std::vector<bool> hit(graph.edge_count(), false);
        for (EdgeIndex e : graph.range_fiber(g.domain)) {
            const auto& img = images[gi][e];
            if (!img) {
                missing.push_back(ename(e));
                continue;
            }
            if (hit[*img]) out.push_back({g.id, ename(e), "image " + ename(*img) + " is hit twice; row is not bijective"});
            hit[*img] = true;
        }
        if (!missing.empty()) {
            std::string list;
            for (const auto& m : missing) list += (list.empty() ? "" : " ") + m;
            out.push_back({g.id, "", "row not total on " + vname(g.domain) + "E^1: missing " + list});
        }
        if (graph.range_fiber(g.domain).size() != graph.range_fiber(g.target).size()) {
            out.push_back({g.id, "", "fibers " + vname(g.domain) + "E^1 and " + vname(g.target) +
                                         "E^1 differ in size; no bijection exists"});
        }
    }
    return out;
}

/// Result of moving one edge or path by a word.
struct EdgeAction {
    EdgeIndex image;
    Word restriction;
};

struct PathAction {
    Path image;
    Word restriction;
};

/**
 * A validated self-similar action of the groupoid generated by `generators`
 * on the path space of `graph`. Groupoid elements are represented by words;
 * two words are the same element iff they act identically.
 */
class SelfSimilarAction {
public:
    static SelfSimilarAction create(Graph graph, std::vector<GeneratorDecl> generators, std::vector<RuleDecl> rules) {
        auto violations = validate_action(graph, generators, rules);
        if (!violations.empty()) throw ValidationError(std::move(violations));
        return SelfSimilarAction(std::move(graph), std::move(generators), std::move(rules));
    }

    const Graph& graph() const noexcept { return graph_; }
    std::span<const GeneratorDecl> generators() const noexcept { return generators_; }
    const std::vector<RuleDecl>& rules() const noexcept { return rules_; }

    std::optional<GeneratorIndex> find_generator(const std::string& id) const {
        for (GeneratorIndex g = 0; g < generators_.size(); ++g) {
            if (generators_[g].id == id) return g;
        }
        return std::nullopt;
    }

    Word word(const std::vector<Token>& tokens) const { return make_word(generators_, tokens); }
    Word generator_word(GeneratorIndex g) const { return word({Token::forward(g)}); }
    Word unit(VertexIndex v) const { return Word::unit(v); }

    std::string format(const Word& w) const { return format_word(graph_, generators_, w); }
    std::string format(const Path& p) const { return graph_.format(p); }

    /// Single token acting on an edge in its domain fiber.
    std::pair<EdgeIndex, const Word*> step(Token t, EdgeIndex e) const {
        GeneratorIndex g = t.generator();
        if (!t.inverted()) return {image_[g][e], &restriction_[g][e]};
        return {preimage_[g][e], &inverse_restriction_[g][e]};
    }

private:
    SelfSimilarAction(Graph graph, std::vector<GeneratorDecl> generators, std::vector<RuleDecl> rules)
        : graph_(std::move(graph)), generators_(std::move(generators)), rules_(std::move(rules)) {
        const std::size_t m = graph_.edge_count();
        image_.assign(generators_.size(), std::vector<EdgeIndex>(m, npos));
        preimage_.assign(generators_.size(), std::vector<EdgeIndex>(m, npos));
        restriction_.assign(generators_.size(), std::vector<Word>(m));
        inverse_restriction_.assign(generators_.size(), std::vector<Word>(m));
        for (const auto& rule : rules_) {
            Word w = rule.restriction.empty() ? Word::unit(rule.restriction_unit) : make_word(generators_, rule.restriction);
            image_[rule.generator][rule.edge] = rule.image;
            preimage_[rule.generator][rule.image] = rule.edge;
            inverse_restriction_[rule.generator][rule.image] = w.inverse();
            restriction_[rule.generator][rule.edge] = std::move(w);
        }
    }

    Graph graph_;
    std::vector<GeneratorDecl> generators_;
    std::vector<RuleDecl> rules_;
    std::vector<std::vector<EdgeIndex>> image_;
    std::vector<std::vector<EdgeIndex>> preimage_;
    std::vector<std::vector<Word>> restriction_;
    std::vector<std::vector<Word>> inverse_restriction_;
};

/// w . e and w|_e for d(w) = r(e).
inline EdgeAction act_edge(const SelfSimilarAction& action, const Word& w, EdgeIndex e) {
    const Graph& graph = action.graph();
    if (e >= graph.edge_count()) throw CompositionError("unknown edge index");
    if (w.domain() != graph.range(e)) {
        throw CompositionError("d(" + action.format(w) + ") != r(" + graph.edge(e).id + ")");
    }
    if (w.is_unit()) return {e, Word::unit(graph.source(e))};

    const auto& tokens = w.tokens();
    std::vector<const Word*> parts(tokens.size());
    EdgeIndex current = e;
    for (std::size_t i = tokens.size(); i-- > 0;) {
        auto [image, restriction] = action.step(tokens[i], current);
        parts[i] = restriction;
        current = image;
    }
    std::vector<Token> joined;
    for (const Word* part : parts) joined.insert(joined.end(), part->tokens().begin(), part->tokens().end());
    return {current, Word(std::move(joined), graph.source(e), graph.source(current))};
}

inline EdgeIndex act_edge_image(const SelfSimilarAction& action, const Word& w, EdgeIndex e) {
    return act_edge(action, w, e).image;
}

/// w . xi and w|_xi, threading restrictions edge by edge.
inline PathAction act_path(const SelfSimilarAction& action, const Word& w, const Path& xi) {
    const Graph& graph = action.graph();
    if (!graph.is_path(xi)) throw CompositionError("not a path");
    if (w.domain() != xi.range) {
        throw CompositionError("d(" + action.format(w) + ") != r(" + graph.format(xi) + ")");
    }
    PathAction out{Path{w.target(), {}}, w};
    out.image.edges.reserve(xi.length());
    for (EdgeIndex e : xi.edges) {
        EdgeAction step = act_edge(action, out.restriction, e);
        out.image.edges.push_back(step.image);
        out.restriction = std::move(step.restriction);
    }
    return out;
}

inline Path apply(const SelfSimilarAction& action, const Word& w, const Path& xi) {
    return act_path(action, w, xi).image;
}

inline Word restrict_path(const SelfSimilarAction& action, const Word& w, const Path& xi) {
    return act_path(action, w, xi).restriction;
}

enum class Verdict { True, False, Unknown };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::True: return "true";
        case Verdict::False: return "false";
        case Verdict::Unknown: return "unknown";
    }
    return "unknown";
}

struct SearchCaps {
    std::size_t state_cap = 1'000'000;
    std::size_t depth_cap = 100'000;
};

struct IdentityResult {
    Verdict verdict = Verdict::Unknown;
    /// For False: a path moved by the word, and where it goes.
    std::optional<Path> witness;
    std::optional<Path> witness_image;
    /// For Unknown: the cap that stopped the search.
    std::string cap_name;
    std::size_t cap_value = 0;
    std::size_t states_explored = 0;
};

/**
 * Decides whether w acts as the unit: breadth-first search over the
 * restriction states reachable from w. Every state must fix each edge of
 * its domain fiber. Terminates whenever the reachable state set is finite
 * and within the caps; otherwise reports Unknown with the cap hit.
 */
inline IdentityResult is_identity(const SelfSimilarAction& action, const Word& w, SearchCaps caps = {}) {
    if (caps.state_cap == 0 || caps.depth_cap == 0) throw PreconditionError("search caps must be positive");
    const Graph& graph = action.graph();

    struct Entry {
        Word state;
        Path prefix;
    };
    IdentityResult result;
    std::unordered_set<Word, WordHash> visited{w};
    std::deque<Entry> queue;
    queue.push_back({w, Path{w.domain(), {}}});

    auto fail = [&](Path witness) {
        result.verdict = Verdict::False;
        result.witness_image = apply(action, w, witness);
        result.witness = std::move(witness);
        result.states_explored = visited.size();
        return result;
    };

    while (!queue.empty()) {
        Entry entry = std::move(queue.front());
        queue.pop_front();
        const Word& s = entry.state;
        for (EdgeIndex e : graph.range_fiber(s.domain())) {
            EdgeAction moved = act_edge(action, s, e);
            if (moved.image != e) {
                Path witness = entry.prefix;
                witness.edges.push_back(e);
                return fail(std::move(witness));
            }
            if (visited.contains(moved.restriction)) continue;
            if (entry.prefix.length() + 1 > caps.depth_cap) {
                result.cap_name = "depth_cap";
                result.cap_value = caps.depth_cap;
                result.states_explored = visited.size();
                return result;
            }
            if (visited.size() >= caps.state_cap) {
                result.cap_name = "state_cap";
                result.cap_value = caps.state_cap;
                result.states_explored = visited.size();
                return result;
            }
            visited.insert(moved.restriction);
            Path next = entry.prefix;
            next.edges.push_back(e);
            queue.push_back({std::move(moved.restriction), std::move(next)});
        }
    }
    result.verdict = Verdict::True;
    result.states_explored = visited.size();
    return result;
}

/// Equality in the groupoid, reduced to is_identity(w2^{-1} w1).
inline IdentityResult words_equal(const SelfSimilarAction& action, const Word& w1, const Word& w2, SearchCaps caps = {}) {
    if (w1.domain() != w2.domain()) {
        IdentityResult r;
        r.verdict = Verdict::False;
        return r;
    }
    if (w1.target() != w2.target()) {
        IdentityResult r;
        r.verdict = Verdict::False;
        Path witness{w1.domain(), {action.graph().range_fiber(w1.domain()).front()}};
        r.witness_image = apply(action, w1, witness);
        r.witness = std::move(witness);
        return r;
    }
    IdentityResult r = is_identity(action, w2.inverse() * w1, caps);
    if (r.witness) r.witness_image = apply(action, w1, *r.witness);
    return r;
}

}  // namespace ssg
