#pragma once

#include <ssg/action.hpp>
#include <ssg/sampling.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ssg {

/// Outcome of a batch of sampled identity checks.
struct CheckReport {
    std::string name;
    std::size_t checks = 0;
    std::size_t unknown = 0;
    std::vector<std::string> failures;

    bool passed() const noexcept { return failures.empty(); }
};

/**
 * Samples words g, h and paths xi, eta up to `depth` and checks the
 * restriction calculus:
 *   g.(xi eta) = (g.xi)(g|_xi . eta),
 *   (1) g|_{xi eta} = (g|_xi)|_eta,
 *   (2) id_{r(xi)}|_xi = id_{s(xi)},
 *   (3) (hg)|_xi = (h|_{g.xi})(g|_xi),
 *   (4) g^{-1}|_xi = (g|_{g^{-1}.xi})^{-1},
 * plus length preservation and inverse coherence. Groupoid equalities go
 * through words_equal; Unknown outcomes are counted, not failed.
 */
inline CheckReport check_properties(const SelfSimilarAction& action, std::size_t depth, std::size_t sample_size,
                                    std::uint64_t seed, SearchCaps caps = {}) {
    CheckReport report{"restriction calculus", 0, 0, {}};
    const Graph& graph = action.graph();
    Sampler rng(seed);

    auto expect_equal = [&](const Word& lhs, const Word& rhs, const std::string& label) {
        ++report.checks;
        IdentityResult r = words_equal(action, lhs, rhs, caps);
        if (r.verdict == Verdict::Unknown) {
            ++report.unknown;
        } else if (r.verdict == Verdict::False) {
            report.failures.push_back(label + ": " + action.format(lhs) + " != " + action.format(rhs));
        }
    };
    auto expect = [&](bool ok, const std::string& label) {
        ++report.checks;
        if (!ok) report.failures.push_back(label);
    };

    for (std::size_t sample = 0; sample < sample_size; ++sample) {
        const Word g = random_word(action, rng, depth);
        const Path xi = random_path(graph, rng, g.domain(), rng.between(0, depth));
        const Path eta = random_path(graph, rng, graph.source(xi), rng.between(0, depth));
        Path xi_eta = xi;
        xi_eta.edges.insert(xi_eta.edges.end(), eta.edges.begin(), eta.edges.end());
        const std::string tag = "g=" + action.format(g) + " xi=" + graph.format(xi);

        const PathAction on_xi = act_path(action, g, xi);
        const PathAction on_xi_eta = act_path(action, g, xi_eta);
        const PathAction tail = act_path(action, on_xi.restriction, eta);
        Path glued = on_xi.image;
        glued.edges.insert(glued.edges.end(), tail.image.edges.begin(), tail.image.edges.end());
        expect(on_xi_eta.image == glued, "self-similarity fails for " + tag);
        expect(on_xi.image.length() == xi.length() && on_xi.image.range == g.target(),
               "length or range not preserved for " + tag);
        expect(apply(action, g.inverse(), on_xi.image) == xi, "inverse does not undo " + tag);

        expect_equal(on_xi_eta.restriction, tail.restriction, "property (1) " + tag);

        const Word unit_restricted = restrict_path(action, Word::unit(xi.range), xi);
        expect(unit_restricted == Word::unit(graph.source(xi)), "property (2) at xi=" + graph.format(xi));

        const Word h = random_word(action, rng, depth, g.target());
        if (h.domain() == g.target()) {
            const Word h_rest = restrict_path(action, h, on_xi.image);
            expect(h_rest.domain() == on_xi.restriction.target(), "property (3) composability " + tag);
            if (h_rest.domain() == on_xi.restriction.target()) {
                expect_equal(restrict_path(action, h * g, xi), h_rest * on_xi.restriction, "property (3) " + tag);
            }
        }

        const Path zeta = random_path(graph, rng, g.target(), rng.between(0, depth));
        const Path back = apply(action, g.inverse(), zeta);
        expect_equal(restrict_path(action, g.inverse(), zeta), restrict_path(action, g, back).inverse(),
                     "property (4) g=" + action.format(g) + " xi=" + graph.format(zeta));
    }
    return report;
}

}  // namespace ssg
