#pragma once

#include <ssg/action.hpp>
#include <ssg/graph.hpp>
#include <ssg/lincomb.hpp>
#include <ssg/orbits.hpp>
#include <ssg/properties.hpp>
#include <ssg/sparse_matrix.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Level operators are written in the orthonormal basis u_alpha = chi_{Z(alpha)} / sqrt(nu(Z(alpha))).
// In that basis pi_n(w) is a 0/1 partial permutation, T_e has 0/1 entries and the
// embedding H_n -> H_{n+1} is p^{-1/2} times the 0/1 prefix-extension matrix.

namespace ssg {

using IntMatrix = SparseMatrix<std::int64_t>;
using ComplexMatrix = SparseMatrix<Complex>;

/// pi_n(w) stored column-wise: image(alpha) = w.alpha, or npos where r(alpha) != d(w).
class PartialPermutation {
public:
    PartialPermutation(std::size_t level, std::vector<std::size_t> images)
        : level_(level), images_(std::move(images)) {}

    std::size_t level() const noexcept { return level_; }
    std::size_t size() const noexcept { return images_.size(); }
    std::size_t image(std::size_t column) const { return images_.at(column); }
    std::span<const std::size_t> images() const noexcept { return images_; }

    std::uint64_t trace() const {
        std::uint64_t t = 0;
        for (std::size_t c = 0; c < images_.size(); ++c) t += images_[c] == c ? 1 : 0;
        return t;
    }

    template <class T = std::int64_t>
    SparseMatrix<T> to_matrix() const {
        SparseMatrix<T> m(images_.size(), images_.size());
        for (std::size_t c = 0; c < images_.size(); ++c) {
            if (images_[c] != npos) m.set(images_[c], c, T(1));
        }
        return m;
    }

private:
    std::size_t level_;
    std::vector<std::size_t> images_;
};

/// Koopman matrix pi_n(w): entry (beta, alpha) = 1 iff r(alpha) = d(w) and w.alpha = beta.
inline PartialPermutation level_matrix(const SelfSimilarAction& action, const Word& w, const LevelIndex& index,
                                       std::size_t n) {
    action.graph().require_constant_degree();
    return PartialPermutation(n, level_images(action, index, n, w));
}

inline PartialPermutation level_matrix(const SelfSimilarAction& action, const Word& w, std::size_t n) {
    LevelIndex index(action.graph(), n);
    return level_matrix(action, w, index, n);
}

/// sum c_i pi_n(w_i)
inline ComplexMatrix lincomb_level_matrix(const SelfSimilarAction& action, const LinComb& x, std::size_t n) {
    action.graph().require_constant_degree();
    LevelIndex index(action.graph(), n);
    ComplexMatrix out(index.size(n), index.size(n));
    for (const auto& [w, c] : x.terms()) {
        auto images = level_images(action, index, n, w);
        for (std::size_t col = 0; col < images.size(); ++col) {
            if (images[col] != npos) out.add_to(images[col], col, c);
        }
    }
    return out;
}

/// dim H_n = |E^0| p^n and q_k = dim H'_k (q_0 = |E^0|).
struct FiltrationDims {
    std::size_t level = 0;
    std::uint64_t dimension = 0;
    std::vector<std::uint64_t> complements;
};

inline FiltrationDims filtration_dims(const Graph& graph, std::size_t n) {
    const std::uint64_t p = graph.require_constant_degree();
    const std::uint64_t v = graph.vertex_count();
    FiltrationDims dims{n, v * checked_power(p, n), {v}};
    for (std::size_t k = 1; k <= n; ++k) dims.complements.push_back(v * checked_power(p, k - 1) * (p - 1));
    return dims;
}

/// 0/1 matrix of chi_{Z(alpha)} -> sum_e chi_{Z(alpha e)}, rows E^{n+1}, cols E^n.
inline IntMatrix prefix_extension_matrix(const LevelIndex& index, std::size_t n) {
    const Graph& graph = index.graph();
    IntMatrix j(index.size(n + 1), index.size(n));
    for (std::size_t alpha = 0; alpha < index.size(n); ++alpha) {
        auto fiber = graph.range_fiber(index.source_at(n, alpha));
        for (std::size_t rank = 0; rank < fiber.size(); ++rank) j.set(index.child(n, alpha, rank), alpha, 1);
    }
    return j;
}

/// Checks J_n pi_n(w) = pi_{n+1}(w) J_n exactly (the common p^{-1/2} factor cancels).
inline bool intertwining_check(const SelfSimilarAction& action, const Word& w, std::size_t n) {
    action.graph().require_constant_degree();
    LevelIndex index(action.graph(), n + 1);
    IntMatrix j = prefix_extension_matrix(index, n);
    IntMatrix lower = level_matrix(action, w, index, n).to_matrix();
    IntMatrix upper = level_matrix(action, w, index, n + 1).to_matrix();
    return j * lower == upper * j;
}

/// Creation operator T_e from level n to level n+1: u_alpha -> u_{e alpha} for r(alpha) = s(e).
inline IntMatrix creation_matrix(const Graph& graph, const LevelIndex& index, EdgeIndex e, std::size_t n) {
    graph.require_constant_degree();
    IntMatrix t(index.size(n + 1), index.size(n));
    // e alpha sits in the subtree of the level-1 position of e, mirroring alpha below s(e).
    struct Frame {
        std::size_t level;
        std::size_t inner;
        std::size_t outer;
    };
    std::vector<Frame> stack{{0, graph.source(e), index.child(0, graph.range(e), graph.fiber_rank(e))}};
    while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        if (f.level == n) {
            t.set(f.outer, f.inner, 1);
            continue;
        }
        auto fiber = graph.range_fiber(index.source_at(f.level, f.inner));
        for (std::size_t rank = 0; rank < fiber.size(); ++rank) {
            stack.push_back({f.level + 1, index.child(f.level, f.inner, rank), index.child(f.level + 1, f.outer, rank)});
        }
    }
    return t;
}

inline IntMatrix creation_matrix(const Graph& graph, EdgeIndex e, std::size_t n) {
    LevelIndex index(graph, n + 1);
    return creation_matrix(graph, index, e, n);
}

/// Diagonal projection P_v onto vE^n.
inline IntMatrix vertex_projection(const LevelIndex& index, VertexIndex v, std::size_t n) {
    IntMatrix p(index.size(n), index.size(n));
    // vE^n is the contiguous block of descendants of position v.
    std::size_t lo = v;
    std::size_t hi = v + 1;
    for (std::size_t k = 0; k < n; ++k) {
        lo = index.child(k, lo, 0);
        hi = hi < index.size(k) ? index.child(k, hi, 0) : index.size(k + 1);
    }
    for (std::size_t i = lo; i < hi; ++i) p.set(i, i, 1);
    return p;
}

/**
 * Graph-algebra relations at levels 0..n_max:
 *   T_e^T T_e = P_{s(e)} on level n,  sum_{r(e)=u} T_e T_e^T = P_u on level n+1.
 * They depend on the graph only.
 */
inline CheckReport graph_relations_check(const Graph& graph, std::size_t n_max) {
    graph.require_constant_degree();
    CheckReport report{"graph relations", 0, 0, {}};
    LevelIndex index(graph, n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        std::vector<IntMatrix> creators;
        for (EdgeIndex e = 0; e < graph.edge_count(); ++e) creators.push_back(creation_matrix(graph, index, e, n));
        for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
            ++report.checks;
            if (creators[e].transpose() * creators[e] != vertex_projection(index, graph.source(e), n)) {
                report.failures.push_back("T^T T != P_s(e) for e=" + graph.edge(e).id + " at level " + std::to_string(n));
            }
        }
        for (VertexIndex u = 0; u < graph.vertex_count(); ++u) {
            IntMatrix sum(index.size(n + 1), index.size(n + 1));
            for (EdgeIndex e : graph.range_fiber(u)) sum = sum + creators[e] * creators[e].transpose();
            ++report.checks;
            if (sum != vertex_projection(index, u, n + 1)) {
                report.failures.push_back("sum T T^T != P_u for u=" + graph.vertex_id(u) + " at level " + std::to_string(n));
            }
        }
    }
    return report;
}

/**
 * Covariance of the level representations with the creation operators, for
 * each word w and level n <= n_max:
 *   pi_{n+1}(w) T_e = T_{w.e} pi_n(w|_e)   for e in d(w)E^1, and 0 otherwise;
 *   pi_n(w) P_v = P_{t(w)} pi_n(w)         for v = d(w), and 0 otherwise.
 */
inline CheckReport covariance_check(const SelfSimilarAction& action, std::size_t n_max, std::span<const Word> words) {
    const Graph& graph = action.graph();
    graph.require_constant_degree();
    CheckReport report{"covariance", 0, 0, {}};
    LevelIndex index(graph, n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        std::vector<IntMatrix> creators;
        for (EdgeIndex e = 0; e < graph.edge_count(); ++e) creators.push_back(creation_matrix(graph, index, e, n));
        for (const Word& w : words) {
            const std::string tag = " for w=" + action.format(w) + " at level " + std::to_string(n);
            IntMatrix upper = level_matrix(action, w, index, n + 1).to_matrix();
            IntMatrix lower = level_matrix(action, w, index, n).to_matrix();
            for (EdgeIndex e = 0; e < graph.edge_count(); ++e) {
                ++report.checks;
                IntMatrix lhs = upper * creators[e];
                if (graph.range(e) != w.domain()) {
                    if (!lhs.is_zero()) report.failures.push_back("U_w S_e != 0, e=" + graph.edge(e).id + tag);
                    continue;
                }
                EdgeAction moved = act_edge(action, w, e);
                IntMatrix rhs = creators[moved.image] * level_matrix(action, moved.restriction, index, n).to_matrix();
                if (lhs != rhs) report.failures.push_back("U_w S_e != S_{w.e} U_{w|e}, e=" + graph.edge(e).id + tag);
            }
            for (VertexIndex v = 0; v < graph.vertex_count(); ++v) {
                ++report.checks;
                IntMatrix lhs = lower * vertex_projection(index, v, n);
                if (v != w.domain()) {
                    if (!lhs.is_zero()) report.failures.push_back("U_w P_v != 0, v=" + graph.vertex_id(v) + tag);
                    continue;
                }
                if (lhs != vertex_projection(index, w.target(), n) * lower) {
                    report.failures.push_back("U_w P_v != P_{w.v} U_w" + tag);
                }
            }
        }
    }
    return report;
}

}  // namespace ssg
