#pragma once

#include <ssg/action.hpp>
#include <ssg/lincomb.hpp>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace ssg {

/// phi(w) = (sigma_w, (w|_e)_e) with e running over d(w)E^1 in declaration order.
struct WreathRecursion {
    std::vector<std::pair<EdgeIndex, EdgeIndex>> permutation;
    std::vector<Word> restrictions;
};

inline WreathRecursion wreath_recursion(const SelfSimilarAction& action, const Word& w) {
    WreathRecursion out;
    for (EdgeIndex e : action.graph().range_fiber(w.domain())) {
        EdgeAction moved = act_edge(action, w, e);
        out.permutation.emplace_back(e, moved.image);
        out.restrictions.push_back(std::move(moved.restriction));
    }
    return out;
}

/**
 * Matrix recursion phi(x) with entries in C_c(G): entry (y, x) is g|_x when
 * g.x = y. For a single word rows are t(w)E^1 and columns d(w)E^1 in
 * declaration order; for a combination rows and columns are fiber ranks.
 */
struct RecursionMatrix {
    std::vector<EdgeIndex> row_edges;
    std::vector<EdgeIndex> col_edges;
    std::vector<std::vector<LinComb>> entries;

    std::size_t rows() const noexcept { return entries.size(); }
    std::size_t cols() const noexcept { return entries.empty() ? 0 : entries.front().size(); }
};

inline RecursionMatrix matrix_recursion(const SelfSimilarAction& action, const Word& w) {
    const Graph& graph = action.graph();
    auto rows = graph.range_fiber(w.target());
    auto cols = graph.range_fiber(w.domain());
    RecursionMatrix m{{rows.begin(), rows.end()}, {cols.begin(), cols.end()},
                      std::vector<std::vector<LinComb>>(rows.size(), std::vector<LinComb>(cols.size()))};
    for (std::size_t j = 0; j < cols.size(); ++j) {
        EdgeAction moved = act_edge(action, w, cols[j]);
        m.entries[graph.fiber_rank(moved.image)][j] = LinComb(moved.restriction);
    }
    return m;
}

inline RecursionMatrix matrix_recursion(const SelfSimilarAction& action, const LinComb& x) {
    const std::size_t p = action.graph().require_constant_degree();
    RecursionMatrix m{{}, {}, std::vector<std::vector<LinComb>>(p, std::vector<LinComb>(p))};
    for (const auto& [w, c] : x.terms()) {
        RecursionMatrix term = matrix_recursion(action, w);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) m.entries[i][j] += c * term.entries[i][j];
        }
    }
    return m;
}

/// Matrix product over C_c(G); entries multiply by convolution.
inline RecursionMatrix multiply(const RecursionMatrix& a, const RecursionMatrix& b) {
    if (a.cols() != b.rows()) throw PreconditionError("recursion matrices do not conform");
    RecursionMatrix out{a.row_edges, b.col_edges,
                        std::vector<std::vector<LinComb>>(a.rows(), std::vector<LinComb>(b.cols()))};
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.entries[i][k].empty()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out.entries[i][j] += a.entries[i][k] * b.entries[k][j];
        }
    }
    return out;
}

/**
 * Equality of two combinations in C_c(G): terms whose words are equal in
 * the groupoid are merged first, then matched coefficient by coefficient.
 */
inline Verdict lincombs_equal(const SelfSimilarAction& action, const LinComb& x, const LinComb& y, SearchCaps caps = {}) {
    LinComb diff = x + Complex(-1.0) * y;
    std::vector<std::pair<Word, Complex>> merged;
    bool unknown = false;
    for (const auto& [w, c] : diff.terms()) {
        bool placed = false;
        for (auto& [rep, total] : merged) {
            IdentityResult r = words_equal(action, w, rep, caps);
            if (r.verdict == Verdict::True) {
                total += c;
                placed = true;
                break;
            }
            if (r.verdict == Verdict::Unknown) unknown = true;
        }
        if (!placed) merged.emplace_back(w, c);
    }
    for (const auto& [rep, total] : merged) {
        if (std::abs(total) > 1e-12) return unknown ? Verdict::Unknown : Verdict::False;
    }
    return Verdict::True;
}

inline Verdict recursions_equal(const SelfSimilarAction& action, const RecursionMatrix& a, const RecursionMatrix& b,
                                SearchCaps caps = {}) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return Verdict::False;
    Verdict overall = Verdict::True;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            Verdict v = lincombs_equal(action, a.entries[i][j], b.entries[i][j], caps);
            if (v == Verdict::False) return Verdict::False;
            if (v == Verdict::Unknown) overall = Verdict::Unknown;
        }
    }
    return overall;
}

/**
 * k-fold entrywise expansion of the matrix recursion of w. Rows run over
 * t(w)E^k and columns over d(w)E^k, both in canonical prefix-major order;
 * entry (beta, alpha) is w|_alpha when w.alpha = beta.
 */
struct IteratedRecursion {
    std::vector<Path> row_paths;
    std::vector<Path> col_paths;
    std::vector<std::vector<std::optional<Word>>> entries;
};

inline IteratedRecursion iterate_recursion(const SelfSimilarAction& action, const Word& w, std::size_t k) {
    if (k == 0) throw PreconditionError("iteration count must be at least 1");
    const Graph& graph = action.graph();
    IteratedRecursion cur{{Path{w.target(), {}}}, {Path{w.domain(), {}}}, {{w}}};
    auto extend = [&](const std::vector<Path>& paths, std::vector<std::size_t>& starts) {
        std::vector<Path> out;
        for (const auto& path : paths) {
            starts.push_back(out.size());
            for (EdgeIndex e : graph.range_fiber(graph.source(path))) {
                Path child = path;
                child.edges.push_back(e);
                out.push_back(std::move(child));
            }
        }
        return out;
    };
    for (std::size_t step = 0; step < k; ++step) {
        IteratedRecursion next;
        std::vector<std::size_t> row_start;
        std::vector<std::size_t> col_start;
        next.row_paths = extend(cur.row_paths, row_start);
        next.col_paths = extend(cur.col_paths, col_start);
        next.entries.assign(next.row_paths.size(), std::vector<std::optional<Word>>(next.col_paths.size()));
        for (std::size_t i = 0; i < cur.row_paths.size(); ++i) {
            for (std::size_t j = 0; j < cur.col_paths.size(); ++j) {
                if (!cur.entries[i][j]) continue;
                const Word& entry = *cur.entries[i][j];
                for (EdgeIndex e : graph.range_fiber(entry.domain())) {
                    EdgeAction moved = act_edge(action, entry, e);
                    next.entries[row_start[i] + graph.fiber_rank(moved.image)][col_start[j] + graph.fiber_rank(e)] =
                        std::move(moved.restriction);
                }
            }
        }
        cur = std::move(next);
    }
    return cur;
}

}  // namespace ssg
