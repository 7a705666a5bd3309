#pragma once

#include <ssg/action.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace ssg {

/// Seeded source of random choices. Uses modulo reduction so sequences are identical across standard libraries.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    std::size_t below(std::size_t n) { return n == 0 ? 0 : static_cast<std::size_t>(engine_() % n); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    double unit_interval() { return static_cast<double>(engine_() >> 11U) * 0x1.0p-53; }

    /// Uniform in [-1, 1] rounded to a multiple of 1/8 so products stay exact in binary.
    double coefficient() { return static_cast<double>(static_cast<int>(below(17)) - 8) / 8.0; }

private:
    std::mt19937_64 engine_;
};

/// Tokens whose domain is v.
inline std::vector<Token> tokens_from(std::span<const GeneratorDecl> gens, VertexIndex v) {
    std::vector<Token> out;
    for (GeneratorIndex g = 0; g < gens.size(); ++g) {
        if (gens[g].domain == v) out.push_back(Token::forward(g));
        if (gens[g].target == v) out.push_back(Token::backward(g));
    }
    return out;
}

/**
 * Random freely reduced word of length at most `max_length`, built from the
 * right (the first-applied token) starting at domain `start` when given.
 * Falls back to the unit when no generator leaves the start vertex.
 */
inline Word random_word(const SelfSimilarAction& action, Sampler& rng, std::size_t max_length,
                        std::optional<VertexIndex> start = std::nullopt) {
    auto gens = action.generators();
    VertexIndex at = start ? *start : rng.below(action.graph().vertex_count());
    if (!start && !gens.empty()) {
        const auto& g = gens[rng.below(gens.size())];
        at = rng.below(2) ? g.domain : g.target;
    }
    const VertexIndex domain = at;
    std::size_t length = max_length == 0 ? 0 : rng.between(1, max_length);
    std::vector<Token> reversed;
    for (std::size_t i = 0; i < length; ++i) {
        auto choices = tokens_from(gens, at);
        if (!reversed.empty()) std::erase(choices, reversed.back().inverse());
        if (choices.empty()) break;
        Token t = choices[rng.below(choices.size())];
        reversed.push_back(t);
        at = t.target(gens);
    }
    if (reversed.empty()) return Word::unit(domain);
    return action.word({reversed.rbegin(), reversed.rend()});
}

inline Path random_path(const Graph& graph, Sampler& rng, VertexIndex range, std::size_t length) {
    Path p{range, {}};
    VertexIndex at = range;
    for (std::size_t i = 0; i < length; ++i) {
        auto fiber = graph.range_fiber(at);
        EdgeIndex e = fiber[rng.below(fiber.size())];
        p.edges.push_back(e);
        at = graph.source(e);
    }
    return p;
}

/// Every freely reduced composable word of length 1..max_length, in a fixed order.
inline std::vector<Word> all_words(const SelfSimilarAction& action, std::size_t max_length) {
    auto gens = action.generators();
    std::vector<Word> out;
    std::vector<std::vector<Token>> frontier;
    for (GeneratorIndex g = 0; g < gens.size(); ++g) {
        frontier.push_back({Token::forward(g)});
        frontier.push_back({Token::backward(g)});
    }
    // Tokens are appended on the left: the new token must have domain t(current word).
    for (std::size_t len = 1; len <= max_length && !frontier.empty(); ++len) {
        std::vector<std::vector<Token>> next;
        for (const auto& tokens : frontier) {
            out.push_back(action.word(tokens));
            if (len == max_length) continue;
            for (Token t : tokens_from(gens, tokens.front().target(gens))) {
                if (t == tokens.front().inverse()) continue;
                std::vector<Token> longer;
                longer.reserve(tokens.size() + 1);
                longer.push_back(t);
                longer.insert(longer.end(), tokens.begin(), tokens.end());
                next.push_back(std::move(longer));
            }
        }
        frontier = std::move(next);
    }
    return out;
}

}  // namespace ssg
