#pragma once

#include <ssg/graph.hpp>

#include <cstddef>
#include <sstream>
#include <string>

namespace ssg {

/// Path-space forest truncated at `depth`: one tree per vertex, node ids are path strings.
inline std::string export_dot(const Graph& graph, std::size_t depth) {
    LevelIndex index(graph, depth);
    std::ostringstream out;
    out << "digraph forest {\n";
    for (std::size_t n = 0; n <= depth; ++n) {
        for (std::size_t pos = 0; pos < index.size(n); ++pos) {
            const std::string id = graph.format(index.path_at(n, pos));
            out << "  \"" << id << "\" [label=\"" << id << "\"];\n";
            if (n == 0) continue;
            Path parent = index.path_at(n, pos);
            parent.edges.pop_back();
            out << "  \"" << graph.format(parent) << "\" -> \"" << id << "\";\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace ssg
