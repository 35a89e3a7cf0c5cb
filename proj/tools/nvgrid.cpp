// nvgrid: command-line front end for canonical forms, normal-form words and
// the experiments of the nvgrid library.

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nvgrid/element.hpp"
#include "nvgrid/grid.hpp"
#include "nvgrid/metrics.hpp"
#include "nvgrid/selfcheck.hpp"
#include "nvgrid/words.hpp"

using namespace nvgrid;

namespace {

enum Exit { kOk = 0, kUsage = 1, kParse = 2, kValidation = 3, kRule = 4, kContract = 5 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return kParse;
        case ErrorKind::NoRuleConfigured:
        case ErrorKind::RuleVerificationFailed: return kRule;
        case ErrorKind::ContractViolation: return kContract;
        case ErrorKind::CapExceeded: return kUsage;
        default: return kValidation;
    }
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Element files are .nve, word files .nvw; stdin ("-") is taken as given.
Element read_element(const std::string& path) {
    if (has_suffix(path, ".nvw")) throw UsageError("'" + path + "' is a word file, expected an element (.nve)");
    return parse_element(slurp(path));
}

Word read_word(const std::string& path) {
    if (has_suffix(path, ".nve")) throw UsageError("'" + path + "' is an element file, expected a word (.nvw)");
    return Word::parse(slurp(path));
}

GridSide parse_side(const std::string& s) { return s == "target" ? GridSide::Target : GridSide::Source; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Canonical forms and normal-form words for higher-dimensional Thompson groups"};
    app.require_subcommand(1);
    std::function<int()> action;

    std::string file_a, file_b, side = "source", point, rules_file;
    bool verify = false, zeros = false, trace = false, csv = false;
    std::uint64_t seed = 0;
    std::size_t budget = 8, dim = 2, trials = 100;
    int only = 0;
    std::vector<std::string> trees;

    auto* canon_cmd = app.add_subcommand("canon", "reduced grid diagram of an element");
    canon_cmd->add_option("element", file_a, "element file (.nve or - for stdin)")->required();
    canon_cmd->callback([&] {
        action = [&] {
            std::cout << format_canon(canon(read_element(file_a)));
            return kOk;
        };
    });

    auto* eq_cmd = app.add_subcommand("eq", "compare two elements by canonical form");
    eq_cmd->add_option("first", file_a)->required();
    eq_cmd->add_option("second", file_b)->required();
    eq_cmd->add_flag("--verify", verify, "cross-check with the refinement oracle");
    eq_cmd->callback([&] {
        action = [&] {
            const auto f = read_element(file_a), g = read_element(file_b);
            if (f.dim() != g.dim()) throw Error(ErrorKind::DimMismatch, "elements of different dimension");
            const bool same = canon(f) == canon(g);
            if (verify && same != equals(f, g))
                throw Error(ErrorKind::ContractViolation, "canonical comparison disagrees with the oracle");
            std::cout << (same ? "equal" : "distinct") << "\n";
            return kOk;
        };
    });

    auto* compose_cmd = app.add_subcommand("compose", "first element, then second");
    compose_cmd->add_option("first", file_a)->required();
    compose_cmd->add_option("second", file_b)->required();
    compose_cmd->callback([&] {
        action = [&] {
            std::cout << format_element(compose(read_element(file_a), read_element(file_b)));
            return kOk;
        };
    });

    auto* invert_cmd = app.add_subcommand("invert", "inverse element");
    invert_cmd->add_option("element", file_a)->required();
    invert_cmd->callback([&] {
        action = [&] {
            std::cout << format_element(invert(read_element(file_a)));
            return kOk;
        };
    });

    auto* eval_cmd = app.add_subcommand("eval", "image of a point");
    eval_cmd->add_option("element", file_a)->required();
    eval_cmd->add_option("--point", point, "coordinates such as \"1/2,3/8\"")->required();
    eval_cmd->callback([&] {
        action = [&] {
            std::cout << format_point(evaluate(read_element(file_a), parse_point(point))) << "\n";
            return kOk;
        };
    });

    auto* word_cmd = app.add_subcommand("word", "normal-form word of a dimension-2 element");
    word_cmd->add_option("element", file_a)->required();
    word_cmd->add_flag("--zeros", zeros, "keep zero exponents in the positive part");
    word_cmd->add_option("--side", side, "gridded side")->check(CLI::IsMember({"source", "target"}));
    word_cmd->callback([&] {
        action = [&] {
            const auto f = read_element(file_a);
            const auto w = parse_side(side) == GridSide::Source ? normal_form(f, zeros) : normal_form_target(f);
            if (!equals(interpret(w), f)) throw Error(ErrorKind::ContractViolation, "word does not interpret back to the input");
            std::cout << w.str() << "\n";
            return kOk;
        };
    });

    auto* interp_cmd = app.add_subcommand("interp", "element of a word");
    interp_cmd->add_option("word", file_a, "word file (.nvw or - for stdin)")->required();
    interp_cmd->callback([&] {
        action = [&] {
            std::cout << format_element(interpret(read_word(file_a)));
            return kOk;
        };
    });

    auto* rewrite_cmd = app.add_subcommand("rewrite", "rewrite a word over A0 A1 B0 B1 P0 Q0 P1 Q1");
    rewrite_cmd->add_option("word", file_a)->required();
    rewrite_cmd->add_option("--rules", rules_file, "extra rules, one 'X<i> := <word>' per line");
    rewrite_cmd->add_flag("--trace", trace, "print the applied rules as comments");
    rewrite_cmd->callback([&] {
        action = [&] {
            const auto rules = rules_file.empty() ? RuleTable::defaults() : RuleTable::parse(slurp(rules_file));
            const auto r = rewrite_finite(read_word(file_a), rules);
            if (trace)
                for (const auto& line : r.trace) std::cout << "# " << line << "\n";
            std::cout << r.word.str() << "\n";
            return kOk;
        };
    });

    auto* grid_cmd = app.add_subcommand("grid", "unreduced grid diagram");
    grid_cmd->add_option("element", file_a)->required();
    grid_cmd->add_option("--side", side, "gridded side")->check(CLI::IsMember({"source", "target"}));
    grid_cmd->callback([&] {
        action = [&] {
            std::cout << format_grid(gridify(read_element(file_a), parse_side(side)));
            return kOk;
        };
    });

    auto* random_cmd = app.add_subcommand("random", "seeded random element");
    random_cmd->add_option("--seed", seed);
    random_cmd->add_option("--budget", budget, "carets per side");
    random_cmd->add_option("--dim", dim)->check(CLI::PositiveNumber);
    random_cmd->callback([&] {
        action = [&] {
            std::cout << format_element(random_element(seed, dim, budget));
            return kOk;
        };
    });

    auto* stats_cmd = app.add_subcommand("stats", "experiments: refinement | bounds | perms");
    std::string kind = "refinement";
    stats_cmd->add_option("kind", kind)->check(CLI::IsMember({"refinement", "bounds", "perms"}));
    stats_cmd->add_option("element", file_a, "element file for 'bounds'");
    stats_cmd->add_option("--seed", seed);
    stats_cmd->add_option("--trials", trials);
    stats_cmd->add_option("--dim", dim)->check(CLI::PositiveNumber);
    stats_cmd->add_option("--budget", budget);
    stats_cmd->add_option("--tree", trees, "coordinate tree leaves for 'perms', one per coordinate");
    stats_cmd->add_flag("--csv", csv, "CSV instead of text");
    stats_cmd->callback([&] {
        action = [&] {
            if (kind == "refinement") {
                const auto rep = refinement_bound_suite(seed, trials, dim, budget);
                std::cout << (csv ? rep.csv() : rep.text());
                return kOk;
            }
            if (kind == "bounds") {
                if (file_a.empty()) throw UsageError("'stats bounds' needs an element file");
                const auto b = length_bounds(read_element(file_a));
                char buf[128];
                std::snprintf(buf, sizeof buf, "M %zu\nlower %.6f\nupper %.6f\n", b.carets, b.lower, b.upper);
                std::cout << buf;
                return kOk;
            }
            std::vector<CoordTree> grid;
            for (const auto& t : trees) grid.push_back(CoordTree::parse(t));
            if (grid.empty()) throw UsageError("'stats perms' needs --tree for every coordinate");
            const auto pc = permutation_count_experiment(grid);
            std::cout << "expected " << pc.expected << "\nobserved " << pc.observed << "\n";
            return kOk;
        };
    });

    auto* check_cmd = app.add_subcommand("check", "run the self-consistency suite");
    check_cmd->add_option("--seed", seed, "suite seed (default: the fixed suite seed)");
    check_cmd->add_option("--only", only, "run one criterion")->check(CLI::Range(1, kCheckCount));
    check_cmd->callback([&] {
        action = [&] {
            const auto s = check_cmd->count("--seed") ? seed : kDefaultCheckSeed;
            std::vector<CheckResult> results;
            if (only)
                results.push_back(run_check(only, s));
            else
                results = run_checks(s);
            bool ok = true;
            for (const auto& r : results) {
                std::cout << format_check(r) << "\n";
                ok = ok && r.passed;
            }
            return ok ? kOk : kContract;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "nvgrid: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "nvgrid: " << e.what() << "\n";
        return exit_code(e.kind());
    }
}
