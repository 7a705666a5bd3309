#pragma once

#include <ssg/action.hpp>
#include <ssg/graph.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ssg {

/**
 * For every position alpha of E^n, the position of w.alpha, or npos when
 * r(alpha) != d(w). Walks the subtree below d(w) once, carrying the
 * restriction of w along the current prefix.
 */
inline std::vector<std::size_t> level_images(const SelfSimilarAction& action, const LevelIndex& index, std::size_t n,
                                             const Word& w) {
    if (n > index.depth()) throw PreconditionError("level exceeds indexed depth");
    const Graph& graph = action.graph();
    std::vector<std::size_t> out(index.size(n), npos);
    struct Frame {
        std::size_t level;
        std::size_t from;
        std::size_t to;
        Word state;
    };
    std::vector<Frame> stack;
    stack.push_back({0, w.domain(), w.target(), w});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.level == n) {
            out[f.from] = f.to;
            continue;
        }
        for (EdgeIndex e : graph.range_fiber(index.source_at(f.level, f.from))) {
            EdgeAction moved = act_edge(action, f.state, e);
            stack.push_back({f.level + 1, index.child(f.level, f.from, graph.fiber_rank(e)),
                             index.child(f.level, f.to, graph.fiber_rank(moved.image)), std::move(moved.restriction)});
        }
    }
    return out;
}

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        std::size_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            std::size_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// Orbits of the action on E^n, each a sorted list of canonical positions; orbits ordered by first element.
struct LevelPartition {
    std::size_t level = 0;
    std::vector<std::vector<std::size_t>> orbits;

    bool transitive() const noexcept { return orbits.size() == 1; }
};

inline LevelPartition level_orbits(const SelfSimilarAction& action, std::size_t n) {
    const Graph& graph = action.graph();
    LevelIndex index(graph, n);
    DisjointSets sets(index.size(n));
    for (GeneratorIndex g = 0; g < action.generators().size(); ++g) {
        auto images = level_images(action, index, n, action.generator_word(g));
        for (std::size_t alpha = 0; alpha < images.size(); ++alpha) {
            if (images[alpha] != npos) sets.unite(alpha, images[alpha]);
        }
    }
    LevelPartition partition{n, {}};
    std::unordered_map<std::size_t, std::size_t> slot;
    for (std::size_t alpha = 0; alpha < index.size(n); ++alpha) {
        std::size_t root = sets.find(alpha);
        auto [it, fresh] = slot.emplace(root, partition.orbits.size());
        if (fresh) partition.orbits.emplace_back();
        partition.orbits[it->second].push_back(alpha);
    }
    return partition;
}

struct TransitivityReport {
    std::size_t verified_depth = 0;
    std::vector<bool> per_level;           // index 0 is level 1
    std::vector<std::size_t> orbit_counts; // index 0 is level 1

    /// True when every checked level is a single orbit; a certificate up to verified_depth only.
    bool transitive_up_to_depth() const {
        return std::all_of(per_level.begin(), per_level.end(), [](bool b) { return b; });
    }
};

inline TransitivityReport is_level_transitive(const SelfSimilarAction& action, std::size_t up_to) {
    if (up_to == 0) throw PreconditionError("up_to must be at least 1");
    TransitivityReport report;
    report.verified_depth = up_to;
    for (std::size_t n = 1; n <= up_to; ++n) {
        auto partition = level_orbits(action, n);
        report.per_level.push_back(partition.transitive());
        report.orbit_counts.push_back(partition.orbits.size());
    }
    return report;
}

/**
 * Memoized transfer recursion for #{alpha in E^n : w.alpha = alpha}:
 *   f_0(w) = [d(w) = t(w)],  f_n(w) = sum over e in d(w)E^1 with w.e = e of f_{n-1}(w|_e).
 */
class FixedPathCounter {
public:
    FixedPathCounter(const SelfSimilarAction& action, std::size_t state_cap = 1'000'000)
        : action_(&action), state_cap_(state_cap) {}

    std::uint64_t count(const Word& w, std::size_t n) {
        if (w.domain() != w.target()) return 0;
        auto& slots = memo_[w];
        if (memo_.size() > state_cap_) throw CapExceeded("state_cap", state_cap_);
        if (slots.size() <= n) slots.resize(n + 1);
        if (slots[n]) return *slots[n];
        std::uint64_t total = 0;
        if (n == 0) {
            total = 1;
        } else {
            for (EdgeIndex e : action_->graph().range_fiber(w.domain())) {
                EdgeAction moved = act_edge(*action_, w, e);
                if (moved.image == e) total += count(moved.restriction, n - 1);
            }
        }
        // Element references survive rehashing, so `slots` is still valid here.
        slots[n] = total;
        return total;
    }

    std::size_t states() const noexcept { return memo_.size(); }

private:
    const SelfSimilarAction* action_;
    std::size_t state_cap_;
    std::unordered_map<Word, std::vector<std::optional<std::uint64_t>>, WordHash> memo_;
};

inline std::uint64_t fixed_paths_count(const SelfSimilarAction& action, const Word& w, std::size_t n,
                                       std::size_t state_cap = 1'000'000) {
    FixedPathCounter counter(action, state_cap);
    return counter.count(w, n);
}

}  // namespace ssg
