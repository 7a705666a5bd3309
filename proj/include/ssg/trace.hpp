#pragma once

#include <ssg/action.hpp>
#include <ssg/graph.hpp>
#include <ssg/lincomb.hpp>
#include <ssg/orbits.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ssg {

enum class Convergence { Exact, ToleranceMet, CapHit };

inline const char* to_string(Convergence c) {
    switch (c) {
        case Convergence::Exact: return "exact";
        case Convergence::ToleranceMet: return "tolerance-met";
        case Convergence::CapHit: return "cap-hit";
    }
    return "cap-hit";
}

struct TraceOptions {
    double tolerance = 1e-12;
    std::size_t max_level = 12;
    std::size_t stability_window = 3;
    std::size_t state_cap = 100'000;
    /// Largest linear system solved exactly before falling back to the level sequence.
    std::size_t exact_system_cap = 400;
};

struct TraceResult {
    Complex value;
    std::optional<Rational> exact_real;
    std::optional<Rational> exact_imag;
    /// t_n = Tr pi_n(x) / (|E^0| p^n) for n = 0..levels_used-1.
    std::vector<Complex> sequence;
    Convergence convergence = Convergence::CapHit;
    std::size_t levels_used = 0;
    std::string cap_name;
    std::size_t cap_value = 0;
};

namespace detail {

/// Solves A x = b over the rationals; A is square and nonsingular.
inline std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw PreconditionError("singular transfer system");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational factor = a[r][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[r][k] -= factor * a[col][k];
            b[r] -= factor * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace detail

/**
 * Exact tau_0(w) for a single word.
 *
 * |E^0| tau_0(w) is the probability that a uniform random walk down the
 * tree, started at w, keeps every visited edge fixed forever. On the finite
 * set of restriction states reachable through fixed edges, that probability
 * is 1 on the largest set of states fixing their whole fiber and closed
 * under restriction, 0 on states that cannot reach it, and the unique
 * solution of h(s) = p^{-1} sum_{fixed e} h(s|_e) on the remaining states.
 * Returns nullopt when the state set or the linear system exceeds the caps.
 */
inline std::optional<Rational> word_trace_exact(const SelfSimilarAction& action, const Word& w,
                                                const TraceOptions& options = {}) {
    const Graph& graph = action.graph();
    const std::size_t p = graph.require_constant_degree();
    if (w.domain() != w.target()) return Rational(0);

    std::vector<Word> states{w};
    std::unordered_map<Word, std::size_t, WordHash> slot{{w, 0}};
    std::vector<std::vector<std::size_t>> successors;
    for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<std::size_t> next;
        for (EdgeIndex e : graph.range_fiber(states[i].domain())) {
            EdgeAction moved = act_edge(action, states[i], e);
            if (moved.image != e) continue;
            auto [it, fresh] = slot.try_emplace(moved.restriction, states.size());
            if (fresh) {
                if (states.size() >= options.state_cap) return std::nullopt;
                states.push_back(std::move(moved.restriction));
            }
            next.push_back(it->second);
        }
        successors.push_back(std::move(next));
    }
    const std::size_t m = states.size();

    std::vector<bool> saturated(m);
    for (std::size_t i = 0; i < m; ++i) saturated[i] = successors[i].size() == p;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (!saturated[i]) continue;
            for (std::size_t j : successors[i]) {
                if (!saturated[j]) {
                    saturated[i] = false;
                    changed = true;
                    break;
                }
            }
        }
    }

    std::vector<std::vector<std::size_t>> predecessors(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j : successors[i]) predecessors[j].push_back(i);
    }
    std::vector<bool> reaches(m, false);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i) {
        if (saturated[i]) {
            reaches[i] = true;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        std::size_t j = queue.front();
        queue.pop_front();
        for (std::size_t i : predecessors[j]) {
            if (!reaches[i]) {
                reaches[i] = true;
                queue.push_back(i);
            }
        }
    }

    const Rational per_vertex(boost::multiprecision::cpp_int(1), boost::multiprecision::cpp_int(graph.vertex_count()));
    if (saturated[0]) return per_vertex;
    if (!reaches[0]) return Rational(0);

    std::vector<std::size_t> unknown_slot(m, npos);
    std::vector<std::size_t> unknowns;
    for (std::size_t i = 0; i < m; ++i) {
        if (reaches[i] && !saturated[i]) {
            unknown_slot[i] = unknowns.size();
            unknowns.push_back(i);
        }
    }
    if (unknowns.size() > options.exact_system_cap) return std::nullopt;

    const Rational step(boost::multiprecision::cpp_int(1), boost::multiprecision::cpp_int(p));
    const std::size_t k = unknowns.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k, Rational(0)));
    std::vector<Rational> b(k, Rational(0));
    for (std::size_t row = 0; row < k; ++row) {
        a[row][row] += 1;
        for (std::size_t j : successors[unknowns[row]]) {
            if (saturated[j]) {
                b[row] += step;
            } else if (unknown_slot[j] != npos) {
                a[row][unknown_slot[j]] -= step;
            }
        }
    }
    auto h = detail::solve_exact(std::move(a), std::move(b));
    return h[unknown_slot[0]] * per_vertex;
}

/**
 * tau_0(x) = lim_n Tr pi_n(x) / (|E^0| p^n).
 *
 * The per-level sequence comes from the fixed-path transfer recursion. The
 * limit is exact when every word's restriction states close under the
 * caps; otherwise the sequence is followed until it changes by less than
 * `tolerance` for `stability_window` consecutive levels.
 */
inline TraceResult trace(const SelfSimilarAction& action, const LinComb& x, const TraceOptions& options = {}) {
    const Graph& graph = action.graph();
    const std::uint64_t p = graph.require_constant_degree();
    TraceResult result;

    bool exact = true;
    Rational exact_re(0);
    Rational exact_im(0);
    for (const auto& [w, c] : x.terms()) {
        auto tau = word_trace_exact(action, w, options);
        if (!tau) {
            exact = false;
            break;
        }
        exact_re += Rational(c.real()) * *tau;
        exact_im += Rational(c.imag()) * *tau;
    }

    FixedPathCounter counter(action, options.state_cap);
    std::size_t stable_run = 0;
    bool tolerance_met = false;
    try {
        for (std::size_t n = 0; n <= options.max_level; ++n) {
            const double denom = static_cast<double>(graph.vertex_count()) * static_cast<double>(checked_power(p, n));
            Complex t(0.0);
            for (const auto& [w, c] : x.terms()) t += c * (static_cast<double>(counter.count(w, n)) / denom);
            if (!result.sequence.empty() && std::abs(t - result.sequence.back()) < options.tolerance) {
                ++stable_run;
            } else {
                stable_run = 0;
            }
            result.sequence.push_back(t);
            if (!exact && stable_run >= options.stability_window) {
                tolerance_met = true;
                break;
            }
        }
    } catch (const CapExceeded& cap) {
        result.cap_name = cap.cap_name();
        result.cap_value = cap.cap_value();
    }
    result.levels_used = result.sequence.size();

    if (exact) {
        result.convergence = Convergence::Exact;
        result.exact_real = exact_re;
        result.exact_imag = exact_im;
        result.value = Complex(exact_re.convert_to<double>(), exact_im.convert_to<double>());
        result.cap_name.clear();
        result.cap_value = 0;
    } else if (tolerance_met) {
        result.convergence = Convergence::ToleranceMet;
        result.value = result.sequence.back();
    } else {
        result.convergence = Convergence::CapHit;
        result.value = result.sequence.empty() ? Complex(0.0) : result.sequence.back();
        if (result.cap_name.empty()) {
            result.cap_name = "max_level";
            result.cap_value = options.max_level;
        }
    }
    return result;
}

}  // namespace ssg
