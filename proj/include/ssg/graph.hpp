#pragma once

#include <ssg/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ssg {

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

struct EdgeDecl {
    std::string id;
    std::string source;
    std::string range;
};

struct Edge {
    std::string id;
    VertexIndex source;
    VertexIndex range;
};

/**
 * Per-vertex size of the range fiber vE^1, plus the common value when all
 * fibers have the same size.
 */
struct DegreeProfile {
    std::vector<std::size_t> per_vertex;
    std::optional<std::size_t> constant;
};

/**
 * A finite path e_1...e_k read from its range toward its source, so that
 * r(e_{i+1}) = s(e_i). An empty edge list denotes the vertex `range`.
 */
struct Path {
    VertexIndex range = 0;
    std::vector<EdgeIndex> edges;

    std::size_t length() const noexcept { return edges.size(); }
    bool operator==(const Path&) const = default;
};

/**
 * Finite directed graph with no sources. Vertices and edges keep their
 * declaration order, which fixes the canonical basis order of every level.
 */
class Graph {
public:
    static Graph build(const std::vector<std::string>& vertices, const std::vector<EdgeDecl>& edges) {
        Graph g;
        std::vector<std::string> duplicates;
        for (const auto& v : vertices) {
            if (!g.vertex_lookup_.emplace(v, g.vertices_.size()).second) {
                duplicates.push_back(v);
                continue;
            }
            g.vertices_.push_back(v);
        }
        std::vector<std::string> dangling;
        for (const auto& e : edges) {
            if (g.edge_lookup_.contains(e.id) || g.vertex_lookup_.contains(e.id)) {
                duplicates.push_back(e.id);
                continue;
            }
            auto s = g.vertex_lookup_.find(e.source);
            auto r = g.vertex_lookup_.find(e.range);
            if (s == g.vertex_lookup_.end() || r == g.vertex_lookup_.end()) {
                dangling.push_back(e.id);
                continue;
            }
            g.edge_lookup_.emplace(e.id, g.edges_.size());
            g.edges_.push_back(Edge{e.id, s->second, r->second});
        }
        if (!duplicates.empty()) throw GraphError("duplicate id", duplicates);
        if (!dangling.empty()) throw GraphError("edge endpoint is not a declared vertex", dangling);
        if (g.vertices_.empty()) throw GraphError("graph has no vertices", {});

        g.fibers_.assign(g.vertices_.size(), {});
        g.fiber_rank_.assign(g.edges_.size(), 0);
        for (EdgeIndex e = 0; e < g.edges_.size(); ++e) {
            auto& fiber = g.fibers_[g.edges_[e].range];
            g.fiber_rank_[e] = fiber.size();
            fiber.push_back(e);
        }
        std::vector<std::string> sources;
        for (VertexIndex v = 0; v < g.vertices_.size(); ++v) {
            if (g.fibers_[v].empty()) sources.push_back(g.vertices_[v]);
        }
        if (!sources.empty()) throw GraphError("vertex has empty range fiber", sources);
        return g;
    }

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::string& vertex_id(VertexIndex v) const { return vertices_.at(v); }
    const std::vector<std::string>& vertex_ids() const noexcept { return vertices_; }
    const Edge& edge(EdgeIndex e) const { return edges_.at(e); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    VertexIndex source(EdgeIndex e) const { return edges_[e].source; }
    VertexIndex range(EdgeIndex e) const { return edges_[e].range; }

    std::optional<VertexIndex> find_vertex(const std::string& id) const {
        auto it = vertex_lookup_.find(id);
        if (it == vertex_lookup_.end()) return std::nullopt;
        return it->second;
    }

    std::optional<EdgeIndex> find_edge(const std::string& id) const {
        auto it = edge_lookup_.find(id);
        if (it == edge_lookup_.end()) return std::nullopt;
        return it->second;
    }

    /// Edges e with r(e) = v, in declaration order.
    std::span<const EdgeIndex> range_fiber(VertexIndex v) const {
        if (v >= fibers_.size()) throw PreconditionError("unknown vertex index " + std::to_string(v));
        return fibers_[v];
    }

    std::span<const EdgeIndex> range_fiber(const std::string& v) const {
        auto idx = find_vertex(v);
        if (!idx) throw PreconditionError("unknown vertex '" + v + "'");
        return fibers_[*idx];
    }

    /// Position of e inside r(e)E^1.
    std::size_t fiber_rank(EdgeIndex e) const { return fiber_rank_.at(e); }

    DegreeProfile degree_profile() const {
        DegreeProfile profile;
        for (const auto& fiber : fibers_) profile.per_vertex.push_back(fiber.size());
        if (std::all_of(profile.per_vertex.begin(), profile.per_vertex.end(),
                        [&](std::size_t d) { return d == profile.per_vertex.front(); })) {
            profile.constant = profile.per_vertex.front();
        }
        return profile;
    }

    /// Returns the constant degree p, or throws when fibers differ in size or p < 2.
    std::size_t require_constant_degree() const {
        auto profile = degree_profile();
        if (!profile.constant) throw PreconditionError("graph does not have constant degree |vE^1|");
        if (*profile.constant < 2) throw PreconditionError("constant degree p must be at least 2");
        return *profile.constant;
    }

    VertexIndex source(const Path& path) const {
        return path.edges.empty() ? path.range : edges_[path.edges.back()].source;
    }

    bool is_path(const Path& path) const {
        if (path.range >= vertices_.size()) return false;
        VertexIndex at = path.range;
        for (EdgeIndex e : path.edges) {
            if (e >= edges_.size() || edges_[e].range != at) return false;
            at = edges_[e].source;
        }
        return true;
    }

    std::string format(const Path& path) const {
        if (path.edges.empty()) return vertices_[path.range];
        std::string out;
        for (std::size_t i = 0; i < path.edges.size(); ++i) {
            if (i) out += '.';
            out += edges_[path.edges[i]].id;
        }
        return out;
    }

private:
    Graph() = default;

    std::vector<std::string> vertices_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, VertexIndex> vertex_lookup_;
    std::unordered_map<std::string, EdgeIndex> edge_lookup_;
    std::vector<std::vector<EdgeIndex>> fibers_;
    std::vector<std::size_t> fiber_rank_;
};

inline Graph build_graph(const std::vector<std::string>& vertices, const std::vector<EdgeDecl>& edges) {
    return Graph::build(vertices, edges);
}

/**
 * Canonical positions of the level sets E^0..E^depth.
 *
 * E^0 follows vertex order; the extensions of the path at position i of E^n
 * occupy one contiguous block of E^{n+1}, ordered by fiber rank.
 */
class LevelIndex {
public:
    LevelIndex(const Graph& graph, std::size_t depth) : graph_(&graph) {
        sources_.reserve(depth + 1);
        offsets_.reserve(depth + 1);
        std::vector<VertexIndex> level0(graph.vertex_count());
        for (VertexIndex v = 0; v < graph.vertex_count(); ++v) level0[v] = v;
        sources_.push_back(std::move(level0));
        for (std::size_t n = 0; n < depth; ++n) {
            const auto& current = sources_.back();
            std::vector<std::size_t> offsets(current.size());
            std::vector<VertexIndex> next;
            for (std::size_t i = 0; i < current.size(); ++i) {
                offsets[i] = next.size();
                for (EdgeIndex e : graph.range_fiber(current[i])) next.push_back(graph.source(e));
            }
            offsets_.push_back(std::move(offsets));
            sources_.push_back(std::move(next));
        }
    }

    std::size_t depth() const noexcept { return sources_.size() - 1; }
    std::size_t size(std::size_t level) const { return sources_.at(level).size(); }
    const Graph& graph() const noexcept { return *graph_; }

    /// s(alpha) for the path at `position` of E^level.
    VertexIndex source_at(std::size_t level, std::size_t position) const { return sources_[level][position]; }

    /// Position in E^{level+1} of alpha e, where alpha sits at `position` and e has fiber rank `rank`.
    std::size_t child(std::size_t level, std::size_t position, std::size_t rank) const {
        return offsets_[level][position] + rank;
    }

    std::size_t index_of(const Path& path) const {
        if (path.length() > depth()) throw PreconditionError("path longer than indexed depth");
        std::size_t pos = path.range;
        for (std::size_t k = 0; k < path.edges.size(); ++k) {
            pos = child(k, pos, graph_->fiber_rank(path.edges[k]));
        }
        return pos;
    }

    Path path_at(std::size_t level, std::size_t position) const {
        // Offsets are strictly increasing because no fiber is empty.
        std::vector<EdgeIndex> reversed;
        std::size_t pos = position;
        for (std::size_t k = level; k > 0; --k) {
            const auto& offs = offsets_[k - 1];
            auto it = std::upper_bound(offs.begin(), offs.end(), pos);
            std::size_t parent = static_cast<std::size_t>(it - offs.begin()) - 1;
            std::size_t rank = pos - offs[parent];
            reversed.push_back(graph_->range_fiber(sources_[k - 1][parent])[rank]);
            pos = parent;
        }
        Path path{pos, {reversed.rbegin(), reversed.rend()}};
        return path;
    }

private:
    const Graph* graph_;
    std::vector<std::vector<VertexIndex>> sources_;
    std::vector<std::vector<std::size_t>> offsets_;
};

/// All paths of length n, in canonical prefix-major order.
inline std::vector<Path> enumerate_level(const Graph& graph, std::size_t n) {
    std::vector<Path> level;
    level.reserve(graph.vertex_count());
    for (VertexIndex v = 0; v < graph.vertex_count(); ++v) level.push_back(Path{v, {}});
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Path> next;
        for (const auto& alpha : level) {
            for (EdgeIndex e : graph.range_fiber(graph.source(alpha))) {
                Path extended = alpha;
                extended.edges.push_back(e);
                next.push_back(std::move(extended));
            }
        }
        level = std::move(next);
    }
    return level;
}

/// nu(Z(alpha)) = 1 / (|E^0| p^|alpha|) for the uniform product measure.
inline Rational cylinder_measure(const Graph& graph, const Path& alpha) {
    if (!graph.is_path(alpha)) throw CompositionError("not a path: " + graph.format(alpha));
    auto profile = graph.degree_profile();
    if (!profile.constant) throw PreconditionError("cylinder measure needs constant degree");
    boost::multiprecision::cpp_int denom = graph.vertex_count();
    for (std::size_t k = 0; k < alpha.length(); ++k) denom *= *profile.constant;
    return Rational(boost::multiprecision::cpp_int(1), denom);
}

/// p^n as an unsigned 64-bit value; throws if it does not fit.
inline std::uint64_t checked_power(std::uint64_t p, std::size_t n) {
    std::uint64_t out = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (out > std::numeric_limits<std::uint64_t>::max() / p) {
            throw PreconditionError("level too deep: p^n overflows 64 bits");
        }
        out *= p;
    }
    return out;
}

}  // namespace ssg
