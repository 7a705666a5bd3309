#pragma once

#include <ssg/action.hpp>
#include <ssg/dot.hpp>
#include <ssg/level_repr.hpp>
#include <ssg/norm.hpp>
#include <ssg/orbits.hpp>
#include <ssg/properties.hpp>
#include <ssg/recursion.hpp>
#include <ssg/sampling.hpp>
#include <ssg/spec_format.hpp>
#include <ssg/trace.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace ssg {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int parse = 2;
inline constexpr int cap = 3;
}  // namespace exit_code

namespace cli_detail {

using json = nlohmann::ordered_json;

inline json complex_json(Complex c) { return json{{"re", c.real()}, {"im", c.imag()}}; }

inline json cap_json(const std::string& name, std::size_t value) { return json{{"name", name}, {"value", value}}; }

inline json report_json(const CheckReport& r, const SearchCaps& caps) {
    json out{{"name", r.name}, {"checks", r.checks}, {"unknown", r.unknown}, {"passed", r.passed()},
             {"failures", r.failures}};
    if (r.unknown > 0) {
        out["caps"] = json::array({cap_json("state_cap", caps.state_cap), cap_json("depth_cap", caps.depth_cap)});
    }
    return out;
}

inline std::string entry_text(const SelfSimilarAction& action, const LinComb& x) {
    if (x.empty()) return "0";
    if (x.size() == 1 && x.terms().begin()->second == Complex(1.0)) return action.format(x.terms().begin()->first);
    return format_lincomb(action, x);
}

template <class Row>
std::string join(const Row& items, const std::string& sep) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

struct Options {
    std::string file;
    bool json_output = false;
    std::size_t level = 0;
    std::size_t up_to = 1;
    std::string word;
    std::string format = "dense";
    std::string lincomb;
    double tol = 1e-12;
    std::size_t max_level = 12;
    std::size_t iterate = 0;
    std::size_t depth = 2;
    std::size_t samples = 50;
    std::uint64_t seed = 1;
    std::string output;
};

inline int cmd_validate(const Options& opt, std::ostream& out) {
    json report{{"command", "validate"}, {"file", opt.file}};
    try {
        SelfSimilarAction action = load_action(opt.file);
        const Graph& graph = action.graph();
        auto profile = graph.degree_profile();
        report["valid"] = true;
        report["vertices"] = graph.vertex_count();
        report["edges"] = graph.edge_count();
        report["generators"] = action.generators().size();
        report["rules"] = action.rules().size();
        report["constant_degree"] = profile.constant ? json(*profile.constant) : json(nullptr);
        report["violations"] = json::array();
    } catch (const ValidationError& err) {
        report["valid"] = false;
        json list = json::array();
        for (const auto& v : err.violations()) {
            list.push_back({{"generator", v.generator}, {"edge", v.edge}, {"message", v.message}});
        }
        report["violations"] = list;
    }
    if (opt.json_output) {
        out << report.dump(2) << '\n';
    } else if (report["valid"].get<bool>()) {
        out << "valid: " << report["vertices"] << " vertices, " << report["edges"] << " edges, " << report["generators"]
            << " generators, " << report["rules"] << " rules\n";
    } else {
        out << "invalid:\n";
        for (const auto& v : report["violations"]) {
            out << "  " << v["generator"].get<std::string>();
            if (!v["edge"].get<std::string>().empty()) out << " on " << v["edge"].get<std::string>();
            out << ": " << v["message"].get<std::string>() << '\n';
        }
    }
    return report["valid"].get<bool>() ? exit_code::ok : exit_code::failure;
}

inline int cmd_orbits(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    LevelIndex index(action.graph(), opt.level);
    LevelPartition partition = level_orbits(action, opt.level);
    json orbits = json::array();
    for (const auto& orbit : partition.orbits) {
        json members = json::array();
        for (std::size_t pos : orbit) members.push_back(action.format(index.path_at(opt.level, pos)));
        orbits.push_back(members);
    }
    json report{{"command", "orbits"}, {"level", opt.level}, {"count", partition.orbits.size()},
                {"transitive", partition.transitive()}, {"orbits", orbits}};
    out << report.dump(2) << '\n';
    return exit_code::ok;
}

inline int cmd_transitive(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    TransitivityReport t = is_level_transitive(action, opt.up_to);
    json levels = json::array();
    for (std::size_t i = 0; i < t.per_level.size(); ++i) {
        levels.push_back({{"level", i + 1}, {"transitive", static_cast<bool>(t.per_level[i])}, {"orbits", t.orbit_counts[i]}});
    }
    json report{{"command", "transitive"},
                {"verified_depth", t.verified_depth},
                {"transitive", t.transitive_up_to_depth()},
                {"note", "verified to depth " + std::to_string(t.verified_depth)},
                {"levels", levels}};
    out << report.dump(2) << '\n';
    return exit_code::ok;
}

inline int cmd_matrix(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    Word w = parse_word(action, opt.word);
    IntMatrix m = level_matrix(action, w, opt.level).to_matrix();
    if (opt.format == "coo") {
        for (std::size_t r = 0; r < m.rows(); ++r) {
            for (const auto& [c, v] : m.row(r)) out << r << ' ' << c << ' ' << v << '\n';
        }
        return exit_code::ok;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out << (c == 0 ? "" : ",") << m.get(r, c);
        out << '\n';
    }
    return exit_code::ok;
}

inline int cmd_trace(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    LinComb x = parse_lincomb(action, opt.lincomb);
    TraceOptions options;
    options.tolerance = opt.tol;
    options.max_level = opt.max_level;
    TraceResult r = trace(action, x, options);
    json sequence = json::array();
    for (const auto& t : r.sequence) sequence.push_back(complex_json(t));
    json report{{"command", "trace"},
                {"lincomb", format_lincomb(action, x)},
                {"value", complex_json(r.value)},
                {"exact", r.convergence == Convergence::Exact},
                {"rational", r.exact_real ? json{{"re", r.exact_real->str()}, {"im", r.exact_imag->str()}} : json(nullptr)},
                {"convergence", to_string(r.convergence)},
                {"levels_used", r.levels_used},
                {"sequence", sequence},
                {"cap", r.convergence == Convergence::CapHit ? cap_json(r.cap_name, r.cap_value) : json(nullptr)}};
    out << report.dump(2) << '\n';
    return r.convergence == Convergence::CapHit ? exit_code::cap : exit_code::ok;
}

inline int cmd_norm(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    LinComb x = parse_lincomb(action, opt.lincomb);
    NormOptions options;
    options.max_level = opt.max_level;
    NormBounds b = norm_bounds(action, x, options);
    json report{{"command", "norm"},
                {"lincomb", format_lincomb(action, x)},
                {"max_level", opt.max_level},
                {"level_norms", b.level_norms},
                {"running_max", b.running_max},
                {"lower_bound", b.running_max.back()},
                {"stabilized", b.stabilized}};
    out << report.dump(2) << '\n';
    return exit_code::ok;
}

inline int cmd_recursion(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    const Graph& graph = action.graph();
    Word w = parse_word(action, opt.word);
    if (opt.iterate > 0) {
        IteratedRecursion it = iterate_recursion(action, w, opt.iterate);
        std::vector<std::string> rows;
        std::vector<std::string> cols;
        for (const auto& p : it.row_paths) rows.push_back(action.format(p));
        for (const auto& p : it.col_paths) cols.push_back(action.format(p));
        std::vector<std::vector<std::string>> cells;
        for (const auto& row : it.entries) {
            std::vector<std::string> line;
            for (const auto& entry : row) line.push_back(entry ? action.format(*entry) : "0");
            cells.push_back(std::move(line));
        }
        if (opt.json_output) {
            out << json{{"command", "recursion"}, {"word", action.format(w)}, {"iterate", opt.iterate},
                        {"rows", rows}, {"cols", cols}, {"entries", cells}}.dump(2)
                << '\n';
        } else {
            out << "rows: " << join(rows, " ") << "\ncols: " << join(cols, " ") << '\n';
            for (const auto& line : cells) out << "[ " << join(line, " ") << " ]\n";
        }
        return exit_code::ok;
    }

    WreathRecursion phi = wreath_recursion(action, w);
    RecursionMatrix m = matrix_recursion(action, w);
    std::vector<std::string> perm;
    std::vector<std::string> restrictions;
    for (const auto& [from, to] : phi.permutation) perm.push_back(graph.edge(from).id + "->" + graph.edge(to).id);
    for (const auto& r : phi.restrictions) restrictions.push_back(action.format(r));
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    for (EdgeIndex e : m.row_edges) rows.push_back(graph.edge(e).id);
    for (EdgeIndex e : m.col_edges) cols.push_back(graph.edge(e).id);
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : m.entries) {
        std::vector<std::string> line;
        for (const auto& entry : row) line.push_back(entry_text(action, entry));
        cells.push_back(std::move(line));
    }
    if (opt.json_output) {
        out << json{{"command", "recursion"}, {"word", action.format(w)}, {"permutation", perm},
                    {"restrictions", restrictions}, {"rows", rows}, {"cols", cols}, {"entries", cells}}.dump(2)
            << '\n';
        return exit_code::ok;
    }
    out << "phi(" << action.format(w) << ") = ([" << join(perm, " ") << "], (" << join(restrictions, ", ") << "))\n";
    out << "rows: " << join(rows, " ") << "\ncols: " << join(cols, " ") << '\n';
    for (const auto& line : cells) out << "[ " << join(line, " ") << " ]\n";
    return exit_code::ok;
}

inline int cmd_check(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    SearchCaps caps;
    std::vector<CheckReport> reports{check_properties(action, opt.depth, opt.samples, opt.seed, caps)};
    bool constant = action.graph().degree_profile().constant.has_value();
    if (constant) {
        reports.push_back(graph_relations_check(action.graph(), opt.depth));
        std::vector<Word> words;
        for (GeneratorIndex g = 0; g < action.generators().size(); ++g) words.push_back(action.generator_word(g));
        Sampler rng(opt.seed);
        for (std::size_t i = 0; i < opt.samples; ++i) words.push_back(random_word(action, rng, 6));
        reports.push_back(covariance_check(action, opt.depth, words));
    }
    json list = json::array();
    bool passed = true;
    std::size_t unknown = 0;
    for (const auto& r : reports) {
        list.push_back(report_json(r, caps));
        passed = passed && r.passed();
        unknown += r.unknown;
    }
    json report{{"command", "check"}, {"depth", opt.depth}, {"samples", opt.samples}, {"seed", opt.seed},
                {"passed", passed}, {"unknown", unknown}, {"reports", list}};
    if (!constant) report["skipped"] = json::array({"graph relations", "covariance"});
    out << report.dump(2) << '\n';
    if (!passed) return exit_code::failure;
    return unknown > 0 ? exit_code::cap : exit_code::ok;
}

inline int cmd_export_dot(const SelfSimilarAction& action, const Options& opt, std::ostream& out) {
    std::string dot = export_dot(action.graph(), opt.depth);
    if (opt.output.empty() || opt.output == "-") {
        out << dot;
        return exit_code::ok;
    }
    std::ofstream file(opt.output, std::ios::binary);
    if (!file) throw Error("cannot write '" + opt.output + "'");
    file << dot;
    return exit_code::ok;
}

}  // namespace cli_detail

/// Runs one `ssg` command. `args` excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    using namespace cli_detail;
    CLI::App app{"Self-similar groupoid actions on finite graphs", "ssg"};
    app.require_subcommand(1);
    Options opt;

    auto add_file = [&](CLI::App* sub) { sub->add_option("file", opt.file, "action spec (.ssg)")->required(); };

    CLI::App* validate = app.add_subcommand("validate", "parse and validate an action spec");
    add_file(validate);
    validate->add_flag("--json", opt.json_output, "emit a JSON report");

    CLI::App* orbits = app.add_subcommand("orbits", "orbit partition of E^n");
    add_file(orbits);
    orbits->add_option("--level", opt.level, "level n")->required();

    CLI::App* transitive = app.add_subcommand("transitive", "level transitivity up to a depth");
    add_file(transitive);
    transitive->add_option("--up-to", opt.up_to, "deepest level checked")->required()->check(CLI::PositiveNumber);

    CLI::App* matrix = app.add_subcommand("matrix", "level matrix of a word");
    add_file(matrix);
    matrix->add_option("--word", opt.word, "word, e.g. \"a b^-1\"")->required();
    matrix->add_option("--level", opt.level, "level n")->required();
    matrix->add_option("--format", opt.format, "dense (CSV) or coo (row col value)")
        ->check(CLI::IsMember({"dense", "coo"}));

    CLI::App* trace_cmd = app.add_subcommand("trace", "self-similar trace of a linear combination");
    add_file(trace_cmd);
    trace_cmd->add_option("--lincomb", opt.lincomb, "e.g. \"1.0*a + 1.0*a^-1\"")->required();
    trace_cmd->add_option("--tol", opt.tol, "stability tolerance for the level sequence");
    trace_cmd->add_option("--max-level", opt.max_level, "deepest level evaluated");

    CLI::App* norm = app.add_subcommand("norm", "operator-norm lower bounds by level");
    add_file(norm);
    norm->add_option("--lincomb", opt.lincomb, "linear combination")->required();
    norm->add_option("--max-level", opt.max_level, "deepest level")->required();

    CLI::App* recursion = app.add_subcommand("recursion", "wreath and matrix recursion of a word");
    add_file(recursion);
    recursion->add_option("--word", opt.word, "word")->required();
    recursion->add_option("--iterate", opt.iterate, "expand K levels instead of one")->check(CLI::PositiveNumber);
    recursion->add_flag("--json", opt.json_output, "emit JSON");

    CLI::App* check = app.add_subcommand("check", "restriction calculus, graph relations and covariance");
    add_file(check);
    check->add_option("--depth", opt.depth, "path length / level bound")->required();
    check->add_option("--samples", opt.samples, "random samples");
    check->add_option("--seed", opt.seed, "sampling seed");

    CLI::App* dot = app.add_subcommand("export-dot", "path-space forest in DOT");
    add_file(dot);
    dot->add_option("--depth", opt.depth, "truncation depth")->required();
    dot->add_option("-o,--output", opt.output, "output file ('-' for stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_code::ok : exit_code::parse;
    }

    if (!std::filesystem::exists(opt.file)) {
        err << "error: cannot open file '" << opt.file << "'\n";
        return exit_code::parse;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt, out);
        SelfSimilarAction action = load_action(opt.file);
        if (orbits->parsed()) return cmd_orbits(action, opt, out);
        if (transitive->parsed()) return cmd_transitive(action, opt, out);
        if (matrix->parsed()) return cmd_matrix(action, opt, out);
        if (trace_cmd->parsed()) return cmd_trace(action, opt, out);
        if (norm->parsed()) return cmd_norm(action, opt, out);
        if (recursion->parsed()) return cmd_recursion(action, opt, out);
        if (check->parsed()) return cmd_check(action, opt, out);
        return cmd_export_dot(action, opt, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return exit_code::parse;
    } catch (const CapExceeded& e) {
        err << "cap hit: " << e.what() << '\n';
        return exit_code::cap;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::failure;
    }
}

}  // namespace ssg
