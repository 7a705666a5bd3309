// Builds the three-vertex forest action in code and prints a few computed quantities.

#include <ssg/level_repr.hpp>
#include <ssg/recursion.hpp>
#include <ssg/spec_format.hpp>
#include <ssg/trace.hpp>

#include <iostream>

int main() {
    using namespace ssg;

    Graph graph = Graph::build({"u", "v", "w"}, {{"e1", "u", "u"},
                                                 {"e2", "u", "v"},
                                                 {"e3", "v", "u"},
                                                 {"e4", "v", "w"},
                                                 {"e5", "v", "w"},
                                                 {"e6", "w", "v"}});
    auto e = [&](const char* id) { return *graph.find_edge(id); };
    auto vtx = [&](const char* id) { return *graph.find_vertex(id); };
    const GeneratorIndex a = 0, b = 1, c = 2;
    std::vector<GeneratorDecl> gens{{"a", vtx("u"), vtx("v")}, {"b", vtx("v"), vtx("w")}, {"c", vtx("w"), vtx("v")}};

    auto rule = [&](GeneratorIndex g, const char* from, const char* to, std::vector<Token> restriction) {
        return RuleDecl{g, e(from), e(to), std::move(restriction), 0};
    };
    std::vector<RuleDecl> rules{
        RuleDecl{a, e("e1"), e("e2"), {}, vtx("u")},
        rule(a, "e3", "e6", {Token::forward(b)}),
        rule(b, "e2", "e5", {Token::forward(a)}),
        rule(b, "e6", "e4", {Token::forward(c)}),
        rule(c, "e4", "e2", {Token::backward(a)}),
        rule(c, "e5", "e6", {Token::forward(b)}),
    };
    SelfSimilarAction action = SelfSimilarAction::create(std::move(graph), std::move(gens), std::move(rules));

    Word wa = action.generator_word(a);
    EdgeAction moved = act_edge(action, wa, *action.graph().find_edge("e3"));
    std::cout << "a.e3 = " << action.graph().edge(moved.image).id << ", a|e3 = " << action.format(moved.restriction)
              << '\n';

    Word cba = parse_word(action, "c b a");
    std::cout << "level 2 fixed paths of c b a: " << level_matrix(action, cba, 2).trace() << '\n';

    TraceResult t = trace(action, parse_lincomb(action, "1*u + 1*v + 1*w"));
    std::cout << "tau(u + v + w) = " << t.exact_real->str() << " (" << to_string(t.convergence) << ")\n";

    RecursionMatrix m = matrix_recursion(action, action.generator_word(b));
    std::cout << "matrix recursion of b:\n";
    for (const auto& row : m.entries) {
        for (const auto& entry : row) {
            std::cout << "  " << (entry.size() == 1 ? action.format(entry.terms().begin()->first) : format_lincomb(action, entry));
        }
        std::cout << '\n';
    }
    std::cout << serialize_spec(action);
}
