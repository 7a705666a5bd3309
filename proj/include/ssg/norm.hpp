#pragma once

#include <ssg/level_repr.hpp>
#include <ssg/lincomb.hpp>
#include <ssg/sampling.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ssg {

struct NormOptions {
    std::size_t max_level = 12;
    /// Krylov subspace size per Lanczos cycle.
    std::size_t krylov_dim = 60;
    std::size_t max_restarts = 40;
    /// Relative Ritz residual at which a level is accepted.
    double tol = 1e-9;
    std::uint64_t seed = 0x5eedULL;
};

struct NormBounds {
    /// Lower bound for ||pi_n(x)|| per level.
    std::vector<double> level_norms;
    /// Running maxima; lower bounds for ||x|| in the Koopman representation.
    std::vector<double> running_max;
    bool stabilized = false;
};

namespace detail {

using CVec = std::vector<Complex>;

inline double norm2(const CVec& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline void normalize(CVec& v) {
    double n = norm2(v);
    if (n > 0.0) {
        for (auto& z : v) z /= n;
    }
}

inline Complex inner(const CVec& a, const CVec& b) {
    Complex s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

struct RitzPair {
    double value = 0.0;
    CVec vector;
};

/**
 * Largest eigenvalue of A^* A by restarted Lanczos with full
 * reorthogonalization. Ritz values never exceed the true eigenvalue, so the
 * result is a lower bound whatever the stopping point.
 */
inline RitzPair top_gram_eigenpair(const ComplexMatrix& a, CVec start, const NormOptions& options) {
    const std::size_t dim = a.cols();
    RitzPair best;
    best.vector = start;
    auto gram = [&](const CVec& v) { return a.multiply_adjoint(a.multiply(v)); };

    for (std::size_t cycle = 0; cycle <= options.max_restarts; ++cycle) {
        normalize(start);
        if (norm2(start) == 0.0) break;
        const std::size_t m = std::min(options.krylov_dim, dim);
        std::vector<CVec> basis{start};
        std::vector<double> alpha;
        std::vector<double> beta;
        bool invariant = false;
        for (std::size_t j = 0; j < m; ++j) {
            CVec w = gram(basis[j]);
            alpha.push_back(inner(basis[j], w).real());
            double b = norm2(w);
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) {
                    Complex c = inner(q, w);
                    for (std::size_t i = 0; i < dim; ++i) w[i] -= c * q[i];
                }
                const double before = b;
                b = norm2(w);
                if (b > 0.7 * before) break;
            }
            if (b <= 1e-13 * std::max(1.0, std::abs(alpha.back()))) {
                invariant = true;
                break;
            }
            if (j + 1 == m) {
                beta.push_back(b);
                break;
            }
            beta.push_back(b);
            for (auto& z : w) z /= b;
            basis.push_back(std::move(w));
        }

        const std::size_t k = alpha.size();
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
            if (i + 1 < k) {
                t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
                t(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t);
        const Eigen::Index top = static_cast<Eigen::Index>(k) - 1;
        const double theta = solver.eigenvalues()(top);
        const auto s = solver.eigenvectors().col(top);

        CVec ritz(dim, Complex(0.0));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t r = 0; r < dim; ++r) ritz[r] += s(static_cast<Eigen::Index>(i)) * basis[i][r];
        }
        if (theta > best.value) best = {theta, ritz};
        const double residual = invariant ? 0.0 : beta.back() * std::abs(s(top));
        if (residual <= options.tol * std::max(1.0, theta)) break;
        start = std::move(ritz);
    }
    return best;
}

}  // namespace detail

/**
 * Lower bounds for ||pi_n(x)||, n = 0..max_level. Each level is seeded with
 * the embedding of the previous level's top vector plus a small seeded
 * perturbation; the Rayleigh quotient of the unperturbed embedding is kept
 * as a candidate, so the per-level bounds never decrease.
 */
inline NormBounds norm_bounds(const SelfSimilarAction& action, const LinComb& x, const NormOptions& options = {}) {
    const Graph& graph = action.graph();
    graph.require_constant_degree();
    LevelIndex index(graph, options.max_level);
    Sampler rng(options.seed);
    NormBounds out;
    detail::CVec previous;

    for (std::size_t n = 0; n <= options.max_level; ++n) {
        const ComplexMatrix a = lincomb_level_matrix(action, x, n);
        const std::size_t dim = index.size(n);
        detail::CVec embedded(dim, Complex(0.0));
        if (!previous.empty()) {
            for (std::size_t alpha = 0; alpha < previous.size(); ++alpha) {
                auto fiber = graph.range_fiber(index.source_at(n - 1, alpha));
                for (std::size_t rank = 0; rank < fiber.size(); ++rank) {
                    embedded[index.child(n - 1, alpha, rank)] = previous[alpha];
                }
            }
            detail::normalize(embedded);
        }
        detail::CVec start(dim);
        const double jitter = previous.empty() ? 1.0 : 1e-3 / std::sqrt(static_cast<double>(dim));
        for (std::size_t i = 0; i < dim; ++i) start[i] = embedded[i] + jitter * (rng.unit_interval() - 0.5);

        detail::RitzPair top = detail::top_gram_eigenpair(a, start, options);
        double estimate = std::sqrt(std::max(0.0, top.value));
        detail::CVec vector = std::move(top.vector);
        if (!previous.empty()) {
            const double carried = detail::norm2(a.multiply(embedded));
            if (carried > estimate) {
                estimate = carried;
                vector = embedded;
            }
        }
        detail::normalize(vector);
        previous = std::move(vector);
        out.level_norms.push_back(estimate);
        out.running_max.push_back(out.running_max.empty() ? estimate : std::max(out.running_max.back(), estimate));
    }
    const auto& rm = out.running_max;
    out.stabilized = rm.size() >= 2 && rm[rm.size() - 1] - rm[rm.size() - 2] <= 1e-9 * std::max(1.0, rm.back());
    return out;
}

}  // namespace ssg
