#pragma once

#include <ssg/error.hpp>
#include <ssg/graph.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ssg {

using GeneratorIndex = std::size_t;

/// A generator g with domain unit d(g) and target unit t(g).
struct GeneratorDecl {
    std::string id;
    VertexIndex domain;
    VertexIndex target;
};

/// g or g^{-1}, packed as 2*g + inverted.
class Token {
public:
    constexpr Token() = default;

    static constexpr Token forward(GeneratorIndex g) { return Token(static_cast<std::uint32_t>(2 * g)); }
    static constexpr Token backward(GeneratorIndex g) { return Token(static_cast<std::uint32_t>(2 * g + 1)); }

    constexpr GeneratorIndex generator() const noexcept { return code_ >> 1U; }
    constexpr bool inverted() const noexcept { return (code_ & 1U) != 0; }
    constexpr Token inverse() const noexcept { return Token(code_ ^ 1U); }
    constexpr std::uint32_t code() const noexcept { return code_; }

    constexpr VertexIndex domain(std::span<const GeneratorDecl> gens) const {
        const auto& g = gens[generator()];
        return inverted() ? g.target : g.domain;
    }
    constexpr VertexIndex target(std::span<const GeneratorDecl> gens) const {
        const auto& g = gens[generator()];
        return inverted() ? g.domain : g.target;
    }

    constexpr auto operator<=>(const Token&) const = default;

private:
    constexpr explicit Token(std::uint32_t code) : code_(code) {}
    std::uint32_t code_ = 0;
};

/**
 * Freely reduced composable product x_1 x_2 ... x_k of generator tokens,
 * acting right-to-left (x_k first). The empty product is the unit at
 * domain() == target(). Equality is syntactic; use words_equal for
 * equality in the groupoid.
 */
class Word {
public:
    Word() = default;

    static Word unit(VertexIndex v) { return Word({}, v, v); }

    /// Caller guarantees the tokens compose from `domain` to `target`; the result is freely reduced.
    Word(std::vector<Token> tokens, VertexIndex domain, VertexIndex target)
        : tokens_(std::move(tokens)), domain_(domain), target_(target) {
        reduce();
    }

    bool is_unit() const noexcept { return tokens_.empty(); }
    std::size_t length() const noexcept { return tokens_.size(); }
    VertexIndex domain() const noexcept { return domain_; }
    VertexIndex target() const noexcept { return target_; }
    const std::vector<Token>& tokens() const noexcept { return tokens_; }

    Word inverse() const {
        std::vector<Token> inv(tokens_.rbegin(), tokens_.rend());
        for (auto& t : inv) t = t.inverse();
        return Word(std::move(inv), target_, domain_);
    }

    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

private:
    void reduce() {
        std::vector<Token> out;
        out.reserve(tokens_.size());
        for (Token t : tokens_) {
            if (!out.empty() && out.back() == t.inverse()) {
                out.pop_back();
            } else {
                out.push_back(t);
            }
        }
        tokens_ = std::move(out);
    }

    std::vector<Token> tokens_;
    VertexIndex domain_ = 0;
    VertexIndex target_ = 0;
};

/// left * right, i.e. apply `right` first. Requires t(right) = d(left).
inline Word compose(const Word& left, const Word& right) {
    if (left.domain() != right.target()) {
        throw CompositionError("product is not composable: t(right) != d(left)");
    }
    std::vector<Token> tokens;
    tokens.reserve(left.length() + right.length());
    tokens.insert(tokens.end(), left.tokens().begin(), left.tokens().end());
    tokens.insert(tokens.end(), right.tokens().begin(), right.tokens().end());
    return Word(std::move(tokens), right.domain(), left.target());
}

inline Word operator*(const Word& left, const Word& right) { return compose(left, right); }

/// Builds a word from tokens listed left to right, checking t(x_{i+1}) = d(x_i).
inline Word make_word(std::span<const GeneratorDecl> gens, const std::vector<Token>& tokens) {
    if (tokens.empty()) throw CompositionError("empty token list needs an explicit unit");
    for (Token t : tokens) {
        if (t.generator() >= gens.size()) throw CompositionError("unknown generator index");
    }
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i + 1].target(gens) != tokens[i].domain(gens)) {
            throw CompositionError("tokens " + std::to_string(i + 1) + " and " + std::to_string(i + 2) +
                                   " are not composable");
        }
    }
    return Word(tokens, tokens.back().domain(gens), tokens.front().target(gens));
}

inline std::string format_word(const Graph& graph, std::span<const GeneratorDecl> gens, const Word& w) {
    if (w.is_unit()) return graph.vertex_id(w.domain());
    std::string out;
    for (std::size_t i = 0; i < w.length(); ++i) {
        if (i) out += ' ';
        Token t = w.tokens()[i];
        out += gens[t.generator()].id;
        if (t.inverted()) out += "^-1";
    }
    return out;
}

struct WordHash {
    std::size_t operator()(const Word& w) const noexcept {
        std::size_t h = std::hash<std::size_t>{}(w.domain() * 1315423911U + w.target());
        for (Token t : w.tokens()) h = h * 1099511628211ULL + t.code() + 0x9e3779b9U;
        return h;
    }
};

}  // namespace ssg
