#pragma once

// Line-oriented action spec format (.ssg):
//
//   # comment
//   vertices: u v w
//   edge e1: u -> u            source -> range
//   generator a: u -> v        d(a) -> t(a)
//   rule a: e1 -> e2 | u       a.e1 = e2, a|_e1 = u
//   rule c: e4 -> e2 | a^-1    restriction tokens listed left to right (leftmost applied last)
//
// Identifiers are runs of [A-Za-z0-9_'].

#include <ssg/action.hpp>
#include <ssg/error.hpp>
#include <ssg/graph.hpp>
#include <ssg/lincomb.hpp>
#include <ssg/word.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ssg {

struct Located {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;

    bool operator==(const Located& other) const { return text == other.text; }
};

struct SpecEdge {
    Located id, source, range;
    bool operator==(const SpecEdge&) const = default;
};

struct SpecGenerator {
    Located id, domain, target;
    bool operator==(const SpecGenerator&) const = default;
};

struct SpecToken {
    Located name;
    bool inverted = false;
    bool operator==(const SpecToken&) const = default;
};

struct SpecRule {
    Located generator, edge, image;
    std::vector<SpecToken> restriction;
    bool operator==(const SpecRule&) const = default;
};

/// Syntactic content of a spec file with source locations. Equality ignores locations.
struct SpecFile {
    std::vector<Located> vertices;
    std::vector<SpecEdge> edges;
    std::vector<SpecGenerator> generators;
    std::vector<SpecRule> rules;

    bool operator==(const SpecFile&) const = default;
};

/// Name-resolution failures (unknown or clashing identifiers), each prefixed with line:column.
class SpecError : public Error {
public:
    explicit SpecError(std::vector<std::string> problems)
        : Error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string msg = "semantic error";
        for (const auto& p : problems) msg += "\n  " + p;
        return msg;
    }

    std::vector<std::string> problems_;
};

namespace detail {

inline bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

class LineCursor {
public:
    LineCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])) != 0) ++pos_;
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    std::size_t column() const noexcept { return pos_ + 1; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, column(), what); }

    Located identifier(const char* what) {
        skip_space();
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
        if (start == pos_) {
            pos_ = start;
            fail(std::string("expected ") + what);
        }
        return Located{std::string(text_.substr(start, pos_ - start)), line_, start + 1};
    }

    bool try_literal(std::string_view lit) {
        skip_space();
        if (text_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    void literal(std::string_view lit) {
        if (!try_literal(lit)) fail("expected '" + std::string(lit) + "'");
    }

    void expect_end() {
        if (!at_end()) fail("unexpected trailing text");
    }

private:
    std::string_view text_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

inline SpecToken parse_spec_token(LineCursor& cursor) {
    SpecToken token{cursor.identifier("generator or vertex name"), false};
    if (cursor.try_literal("^")) {
        cursor.literal("-1");
        token.inverted = true;
    }
    return token;
}

}  // namespace detail

inline SpecFile parse_spec(std::string_view text) {
    SpecFile spec;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        detail::LineCursor cur(line, line_no);
        if (cur.at_end()) continue;
        Located keyword = cur.identifier("keyword");
        if (keyword.text == "vertices") {
            cur.literal(":");
            if (cur.at_end()) cur.fail("expected at least one vertex name");
            while (!cur.at_end()) spec.vertices.push_back(cur.identifier("vertex name"));
        } else if (keyword.text == "edge") {
            SpecEdge e;
            e.id = cur.identifier("edge name");
            cur.literal(":");
            e.source = cur.identifier("source vertex");
            cur.literal("->");
            e.range = cur.identifier("range vertex");
            cur.expect_end();
            spec.edges.push_back(std::move(e));
        } else if (keyword.text == "generator") {
            SpecGenerator g;
            g.id = cur.identifier("generator name");
            cur.literal(":");
            g.domain = cur.identifier("domain vertex");
            cur.literal("->");
            g.target = cur.identifier("target vertex");
            cur.expect_end();
            spec.generators.push_back(std::move(g));
        } else if (keyword.text == "rule") {
            SpecRule r;
            r.generator = cur.identifier("generator name");
            cur.literal(":");
            r.edge = cur.identifier("edge name");
            cur.literal("->");
            r.image = cur.identifier("image edge");
            cur.literal("|");
            if (cur.at_end()) cur.fail("expected restriction word");
            while (!cur.at_end()) r.restriction.push_back(detail::parse_spec_token(cur));
            spec.rules.push_back(std::move(r));
        } else {
            throw ParseError(keyword.line, keyword.column, "unknown keyword '" + keyword.text + "'");
        }
        if (end == text.size()) break;
    }
    return spec;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

/// Resolves names and builds the validated action. Throws SpecError, GraphError or ValidationError.
inline SelfSimilarAction build_action(const SpecFile& spec) {
    std::vector<std::string> problems;
    auto where = [](const Located& l) { return std::to_string(l.line) + ":" + std::to_string(l.column) + ": "; };

    std::vector<std::string> vertex_names;
    for (const auto& v : spec.vertices) vertex_names.push_back(v.text);
    std::vector<EdgeDecl> edge_decls;
    for (const auto& e : spec.edges) edge_decls.push_back({e.id.text, e.source.text, e.range.text});
    for (const auto& e : spec.edges) {
        for (const Located* end : {&e.source, &e.range}) {
            if (std::find(vertex_names.begin(), vertex_names.end(), end->text) == vertex_names.end()) {
                problems.push_back(where(*end) + "unknown vertex " + end->text);
            }
        }
    }
    if (!problems.empty()) throw SpecError(problems);
    Graph graph = Graph::build(vertex_names, edge_decls);

    std::unordered_map<std::string, GeneratorIndex> gen_lookup;
    std::vector<GeneratorDecl> gens;
    for (const auto& g : spec.generators) {
        auto d = graph.find_vertex(g.domain.text);
        auto t = graph.find_vertex(g.target.text);
        if (!d) problems.push_back(where(g.domain) + "unknown vertex " + g.domain.text);
        if (!t) problems.push_back(where(g.target) + "unknown vertex " + g.target.text);
        if (graph.find_vertex(g.id.text) || graph.find_edge(g.id.text) || gen_lookup.contains(g.id.text)) {
            problems.push_back(where(g.id) + "duplicate id " + g.id.text);
        }
        gen_lookup.emplace(g.id.text, gens.size());
        gens.push_back({g.id.text, d.value_or(0), t.value_or(0)});
    }

    std::vector<RuleDecl> rules;
    for (const auto& r : spec.rules) {
        RuleDecl rule;
        auto g = gen_lookup.find(r.generator.text);
        auto e = graph.find_edge(r.edge.text);
        auto img = graph.find_edge(r.image.text);
        if (g == gen_lookup.end()) problems.push_back(where(r.generator) + "unknown generator " + r.generator.text);
        if (!e) problems.push_back(where(r.edge) + "unknown edge " + r.edge.text);
        if (!img) problems.push_back(where(r.image) + "unknown edge " + r.image.text);
        if (g != gen_lookup.end()) rule.generator = g->second;
        rule.edge = e.value_or(0);
        rule.image = img.value_or(0);
        if (r.restriction.size() == 1 && !r.restriction[0].inverted && graph.find_vertex(r.restriction[0].name.text)) {
            rule.restriction_unit = *graph.find_vertex(r.restriction[0].name.text);
        } else {
            for (const auto& tok : r.restriction) {
                auto tg = gen_lookup.find(tok.name.text);
                if (tg == gen_lookup.end()) {
                    problems.push_back(where(tok.name) + "unknown generator " + tok.name.text);
                    continue;
                }
                rule.restriction.push_back(tok.inverted ? Token::backward(tg->second) : Token::forward(tg->second));
            }
        }
        rules.push_back(std::move(rule));
    }
    if (!problems.empty()) throw SpecError(problems);
    return SelfSimilarAction::create(std::move(graph), std::move(gens), std::move(rules));
}

inline SelfSimilarAction load_action(const std::string& path) { return build_action(parse_spec(read_file(path))); }

/// Canonical text form; parse_spec(serialize_spec(a)) rebuilds the same action.
inline std::string serialize_spec(const SelfSimilarAction& action) {
    const Graph& graph = action.graph();
    std::ostringstream out;
    out << "vertices:";
    for (const auto& v : graph.vertex_ids()) out << ' ' << v;
    out << '\n';
    for (const auto& e : graph.edges()) {
        out << "edge " << e.id << ": " << graph.vertex_id(e.source) << " -> " << graph.vertex_id(e.range) << '\n';
    }
    for (const auto& g : action.generators()) {
        out << "generator " << g.id << ": " << graph.vertex_id(g.domain) << " -> " << graph.vertex_id(g.target) << '\n';
    }
    for (const auto& r : action.rules()) {
        Word restriction = r.restriction.empty() ? Word::unit(r.restriction_unit) : action.word(r.restriction);
        out << "rule " << action.generators()[r.generator].id << ": " << graph.edge(r.edge).id << " -> "
            << graph.edge(r.image).id << " | " << action.format(restriction) << '\n';
    }
    return out.str();
}

/// Word syntax: tokens separated by spaces or '.', inverse written g^-1, a lone vertex name is its unit.
inline Word parse_word(const SelfSimilarAction& action, std::string_view text) {
    std::string cleaned(text);
    for (char& c : cleaned) {
        if (c == '.') c = ' ';
    }
    detail::LineCursor cur(cleaned, 1);
    if (cur.at_end()) cur.fail("empty word");
    std::vector<SpecToken> tokens;
    while (!cur.at_end()) tokens.push_back(detail::parse_spec_token(cur));
    if (tokens.size() == 1 && !tokens[0].inverted) {
        if (auto v = action.graph().find_vertex(tokens[0].name.text)) return Word::unit(*v);
    }
    std::vector<Token> out;
    for (const auto& t : tokens) {
        auto g = action.find_generator(t.name.text);
        if (!g) throw ParseError(1, t.name.column, "unknown generator '" + t.name.text + "'");
        out.push_back(t.inverted ? Token::backward(*g) : Token::forward(*g));
    }
    return action.word(out);
}

namespace detail {

inline double parse_number(std::string_view text, std::size_t& pos) {
    std::size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) != 0 || text[pos] == '.' ||
                                 text[pos] == 'e' || text[pos] == 'E' ||
                                 ((text[pos] == '-' || text[pos] == '+') && pos > start &&
                                  (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
        ++pos;
    }
    double value = 0.0;
    auto res = std::from_chars(text.data() + start, text.data() + pos, value);
    if (res.ec != std::errc() || res.ptr != text.data() + pos) {
        throw ParseError(1, start + 1, "malformed number");
    }
    return value;
}

inline void skip_spaces(std::string_view text, std::size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])) != 0) ++pos;
}

/// Coefficient forms: 2, 0.5, 3i, (1+2i), (1-0.5i).
inline Complex parse_coefficient(std::string_view text, std::size_t& pos) {
    skip_spaces(text, pos);
    if (pos < text.size() && text[pos] == '(') {
        ++pos;
        skip_spaces(text, pos);
        double sign = 1.0;
        if (pos < text.size() && text[pos] == '-') {
            sign = -1.0;
            ++pos;
        }
        double re = sign * parse_number(text, pos);
        skip_spaces(text, pos);
        if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) throw ParseError(1, pos + 1, "expected '+' or '-'");
        double im_sign = text[pos] == '-' ? -1.0 : 1.0;
        ++pos;
        skip_spaces(text, pos);
        double im = im_sign * parse_number(text, pos);
        if (pos >= text.size() || text[pos] != 'i') throw ParseError(1, pos + 1, "expected 'i'");
        ++pos;
        skip_spaces(text, pos);
        if (pos >= text.size() || text[pos] != ')') throw ParseError(1, pos + 1, "expected ')'");
        ++pos;
        return {re, im};
    }
    double sign = 1.0;
    if (pos < text.size() && text[pos] == '-') {
        sign = -1.0;
        ++pos;
    }
    double value = sign * parse_number(text, pos);
    if (pos < text.size() && text[pos] == 'i') {
        ++pos;
        return {0.0, value};
    }
    return {value, 0.0};
}

}  // namespace detail

/**
 * Linear combination syntax: terms joined by '+' or '-', each either a word
 * or `coefficient*word`, e.g. "1.0*a + 1.0*a^-1" or "u - 0.5*c b".
 */
inline LinComb parse_lincomb(const SelfSimilarAction& action, std::string_view text) {
    LinComb out;
    std::size_t pos = 0;
    detail::skip_spaces(text, pos);
    if (pos == text.size()) throw ParseError(1, 1, "empty linear combination");
    if (text.substr(pos) == "0") return out;
    bool first = true;
    while (true) {
        detail::skip_spaces(text, pos);
        double sign = 1.0;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            sign = text[pos] == '-' ? -1.0 : 1.0;
            ++pos;
        } else if (!first) {
            throw ParseError(1, pos + 1, "expected '+' or '-'");
        }
        first = false;
        detail::skip_spaces(text, pos);
        Complex coeff(1.0);
        // A term starts with a coefficient when it opens with a digit, '.', '(' or a negative number.
        auto numeric = [&](std::size_t at) {
            return at < text.size() && (std::isdigit(static_cast<unsigned char>(text[at])) != 0 || text[at] == '.');
        };
        if (numeric(pos) || (pos < text.size() && text[pos] == '(') ||
            (pos < text.size() && text[pos] == '-' && numeric(pos + 1))) {
            std::size_t probe = pos;
            Complex c = detail::parse_coefficient(text, probe);
            detail::skip_spaces(text, probe);
            if (probe >= text.size() || text[probe] != '*') throw ParseError(1, probe + 1, "expected '*' after coefficient");
            coeff = c;
            pos = probe + 1;
        }
        // The word runs until a '+' or a '-' that is not part of "^-1".
        std::size_t start = pos;
        while (pos < text.size()) {
            if (text[pos] == '+') break;
            if (text[pos] == '-' && !(pos > 0 && text[pos - 1] == '^')) break;
            ++pos;
        }
        std::string_view word_text = text.substr(start, pos - start);
        Word w;
        try {
            w = parse_word(action, word_text);
        } catch (const ParseError& err) {
            throw ParseError(1, start + err.column(), err.what());
        }
        out.add(w, sign * coeff);
        if (pos >= text.size()) break;
    }
    return out;
}

}  // namespace ssg
