#include "nvgrid/selfcheck.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>

#include "nvgrid/grid.hpp"
#include "nvgrid/metrics.hpp"
#include "nvgrid/random.hpp"
#include "nvgrid/words.hpp"

namespace nvgrid {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string canon_text(const Element& f) { return format_canon(canon(f)); }

// Random budget in [1, max_budget].
std::size_t budget_in(Rng& rng, std::size_t max_budget) { return 1 + uniform_below(rng, max_budget); }

struct Tally {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (!ok && failures++ == 0) first_failure = what;
    }
    std::string summary() const {
        std::string out = std::to_string(cases - failures) + "/" + std::to_string(cases) + " cases";
        if (failures) out += "; first failure: " + first_failure;
        return out;
    }
};

// -------------------------------------------------------------- criteria

CheckResult confluence(std::uint64_t seed) {
    const auto t0 = Clock::now();
    Tally tally;
    const struct { std::size_t dim, count, budget; } plan[] = {{2, 300, 24}, {3, 100, 15}};
    for (const auto& p : plan) {
        Rng rng(derive_seed(seed, p.dim));
        for (std::size_t i = 0; i < p.count; ++i) {
            const auto f = random_element(rng, p.dim, budget_in(rng, p.budget));
            const auto want = canon_text(f);
            const std::string tag = "dim " + std::to_string(p.dim) + " element " + std::to_string(i);
            for (int r = 0; r < 5; ++r) {
                const auto refined = random_refinement(f, rng, 1 + uniform_below(rng, 8));
                tally.record(canon_text(refined) == want, tag + " pre-refinement " + std::to_string(r));
                tally.record(format_canon(reduce(gridify(refined), rng)) == want, tag + " random order " + std::to_string(r));
            }
            const auto g = random_element(rng, p.dim, budget_in(rng, p.budget / 2));
            tally.record(canon_text(compose(compose(f, g), invert(g))) == want, tag + " (f.g).g^-1");
        }
    }
    const double secs = seconds_since(t0);
    char buf[64];
    std::snprintf(buf, sizeof buf, "; %.2f s", secs);
    return {1, "canonical form is confluent", tally.failures == 0 && secs <= 60.0, tally.summary() + buf};
}

CheckResult oracle_agreement(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 2));
    Tally random_pairs, engineered;
    std::size_t equal_random = 0;
    for (std::size_t i = 0; i < 300; ++i) {
        const std::size_t dim = 1 + i % 3;
        // Small budgets so that some unrelated pairs coincide.
        const auto f = random_element(rng, dim, uniform_below(rng, 4));
        const auto g = random_element(rng, dim, uniform_below(rng, 4));
        const bool oracle = equals(f, g);
        equal_random += oracle;
        random_pairs.record((canon_text(f) == canon_text(g)) == oracle, "random pair " + std::to_string(i));
    }
    for (std::size_t i = 0; i < 100; ++i) {
        const std::size_t dim = 1 + i % 3;
        const auto f = random_element(rng, dim, budget_in(rng, 10));
        Element g = random_refinement(f, rng, 1 + uniform_below(rng, 6));
        if (i % 2) {
            const auto h = random_element(rng, dim, budget_in(rng, 6));
            g = compose(compose(g, h), invert(h));
        }
        const bool oracle = equals(f, g);
        engineered.record(oracle && canon_text(f) == canon_text(g), "engineered pair " + std::to_string(i));
    }
    return {2, "canonical equality matches the oracle",
            random_pairs.failures == 0 && engineered.failures == 0,
            "random " + random_pairs.summary() + " (" + std::to_string(equal_random) + " equal); engineered " +
                engineered.summary()};
}

CheckResult group_axioms(std::uint64_t seed) {
    Tally tally;
    for (std::size_t dim = 1; dim <= 3; ++dim) {
        Rng rng(derive_seed(seed, 30 + dim));
        const auto id = Element::identity(dim);
        const auto id_canon = canon_text(id);
        for (std::size_t i = 0; i < 100; ++i) {
            const std::size_t b = dim == 3 ? 6 : 10;
            const auto f = random_element(rng, dim, budget_in(rng, b));
            const auto g = random_element(rng, dim, budget_in(rng, b));
            const auto h = random_element(rng, dim, budget_in(rng, b));
            const std::string tag = "dim " + std::to_string(dim) + " triple " + std::to_string(i);
            const auto fc = canon_text(f);
            tally.record(canon_text(compose(compose(f, g), h)) == canon_text(compose(f, compose(g, h))), tag + " associativity");
            tally.record(canon_text(compose(f, id)) == fc && canon_text(compose(id, f)) == fc, tag + " identity");
            tally.record(canon_text(compose(f, invert(f))) == id_canon && canon_text(compose(invert(f), f)) == id_canon,
                         tag + " inverse");
        }
    }
    return {3, "group axioms hold", tally.failures == 0, tally.summary()};
}

CheckResult algebraic_round_trip(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 4));
    Tally round_trip, stable;
    for (std::size_t i = 0; i < 200; ++i) {
        const auto f = random_element(rng, 2, budget_in(rng, 12));
        const auto w = normal_form(f);
        const std::string tag = "element " + std::to_string(i);
        round_trip.record(equals(interpret(w), f), tag + ": " + w.str());
        const auto refined = random_refinement(f, rng, 1 + uniform_below(rng, 6));
        const auto g = random_element(rng, 2, budget_in(rng, 6));
        const auto conj = compose(compose(refined, g), invert(g));
        stable.record(normal_form(refined) == w && normal_form(conj) == w, tag + " representative");
    }
    return {4, "normal forms interpret back and are representative independent",
            round_trip.failures == 0 && stable.failures == 0,
            "round trip " + round_trip.summary() + "; letter identity " + stable.summary()};
}

std::string first_diff(const std::string& got, const std::string& want) {
    std::size_t k = 0;
    while (k < got.size() && k < want.size() && got[k] == want[k]) ++k;
    if (k == got.size() && k == want.size()) return "no character diff";
    return "first diff at column " + std::to_string(k) + ": got '" + got.substr(k, 12) + "' expected '" +
           want.substr(k, 12) + "'";
}

CheckResult golden_word(std::uint64_t) {
    static const std::string expected =
        "C1 C2 C3 A0 B0^2 B2^2 B4 A6^2 B6^2 B8^2 B10 B12^2 B14^2 B16 B18^2 B20^2 B22 B24 B26";
    const std::vector<CoordTree> trees{CoordTree::parse("00 0100 0101 011 1"), CoordTree::parse("00 01 100 101 110 111")};
    const auto exponents = leaf_exponents(trees[0].to_colored(0), 0);
    const auto word = emit_positive(trees);
    const auto verbose = emit_positive(trees, true);

    std::vector<std::string> problems;
    if (exponents != std::vector<std::size_t>{1, 2, 0, 0, 0}) problems.push_back("T_v exponents differ");

    // Skeleton: C prefix, A positions, copies as shifts of the first copy.
    const auto& letters = verbose.letters();
    if (Word(std::vector<Generator>(letters.begin(), letters.begin() + std::min<std::size_t>(3, letters.size()))).str() !=
        "C1 C2 C3")
        problems.push_back("C prefix");
    std::vector<std::size_t> a_positions;
    std::map<std::size_t, std::vector<Generator>> copies;
    const std::size_t width = trees[1].leaf_count();
    for (const auto& g : letters) {
        if (g.family == Family::A) a_positions.push_back(g.index);
        if (g.family == Family::B) copies[g.index / width].push_back(g);
    }
    if (a_positions != std::vector<std::size_t>{0, 6, 12, 18, 24}) problems.push_back("A positions");
    // The last copy hangs off the spine and has its own exponents.
    for (const auto& [j, copy] : copies)
        if (j + 1 < trees[0].leaf_count() && Word(copy) != shift(Word(copies[0]), long(width * j))) problems.push_back("copy " + std::to_string(j) + " is not a shift");

    const auto tree = product_pattern(trees).tree;
    const bool contract = equals(interpret(word), positive_element(tree));
    const bool tree_word = emit_tree_word(tree) == word;
    if (!contract) problems.push_back("interpret(word) != positive element");
    if (!tree_word) problems.push_back("tree-removal emission disagrees");

    const std::string got = word.str();
    std::string detail = "emitted '" + got + "'; " + first_diff(got, expected);
    for (const auto& p : problems) detail += "; " + p;
    return {5, "golden word", problems.empty() && got == expected, detail};
}

CheckResult refinement_bound(std::uint64_t seed) {
    std::size_t trials = 0, violations = 0;
    double worst = 0;
    const struct { std::size_t dim, trials, budget; } plan[] = {{1, 300, 24}, {2, 300, 24}, {3, 100, 15}};
    for (const auto& p : plan) {
        const auto rep = refinement_bound_suite(derive_seed(seed, 60 + p.dim), p.trials, p.dim, p.budget);
        if (!rep.consistent()) return {6, "refinement bound", false, "inconsistent report for dim " + std::to_string(p.dim)};
        trials += rep.trials;
        violations += rep.violations;
        worst = std::max(worst, rep.max_ratio);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu trials, %zu violations of M+1 <= (c+1)^dim, max ratio %.4f", trials, violations, worst);
    return {6, "refinement bound", violations == 0, buf};
}

CheckResult factorial_count(std::uint64_t) {
    const auto square = permutation_count_experiment({CoordTree::parse("0 1"), CoordTree::parse("0 1")});
    const auto pair = permutation_count_experiment({CoordTree::parse("0 1"), CoordTree()});
    const bool ok = square.expected == 24 && square.observed == 24 && pair.expected == 2 && pair.observed == 2;
    return {7, "factorial counting", ok,
            "2x2 grid: " + std::to_string(square.observed) + "/" + std::to_string(square.expected) +
                " distinct; 2-cell grid: " + std::to_string(pair.observed) + "/" + std::to_string(pair.expected)};
}

CheckResult dim1_degeneration(std::uint64_t seed) {
    Rng rng(derive_seed(seed, 8));
    Tally tally;
    for (std::size_t i = 0; i < 300; ++i) {
        const auto f = random_element(rng, 1, budget_in(rng, 16));
        const auto refined = random_refinement(f, rng, uniform_below(rng, 5));
        tally.record(canon(refined).diagram.element() == classical_reduced_pair(f), "element " + std::to_string(i));
    }
    const std::vector<CoordTree> trees{CoordTree::parse("00 0100 0101 011 1"), CoordTree()};
    const auto quiet = emit_positive(trees).str();
    const auto verbose = emit_positive(trees, true).str();
    const bool words = quiet == "A0 A1^2" && verbose == "A0 A1^2 A2^0 A3^0 A4^0";
    return {8, "dimension 1 reduces to classical tree pairs", tally.failures == 0 && words,
            "classical agreement " + tally.summary() + "; words '" + quiet + "' / '" + verbose + "'"};
}

CheckResult finite_rewriting(std::uint64_t seed) {
    std::string detail;
    RuleTable rules;
    try {
        rules = RuleTable::defaults();
    } catch (const Error& e) {
        return {9, "finite rewriting", false, std::string("default rules failed to load: ") + e.what()};
    }
    detail = std::to_string(rules.size()) + " default rules verified; ";

    Rng rng(derive_seed(seed, 9));
    Tally tally;
    const Family families[] = {Family::A, Family::B, Family::P};
    for (std::size_t i = 0; i < 100; ++i) {
        Word w;
        const std::size_t len = 1 + uniform_below(rng, 5);
        for (std::size_t k = 0; k < len; ++k) {
            long e = long(1 + uniform_below(rng, 2));
            if (uniform_below(rng, 2)) e = -e;
            w.push_back({families[uniform_below(rng, 3)], uniform_below(rng, 7), e});
        }
        bool ok = false;
        try {
            const auto r = rewrite_finite(w, rules);
            ok = equals(interpret(r.word), interpret(w));
            for (const auto& g : r.word.letters()) ok = ok && RuleTable::in_finite_set(g);
        } catch (const Error&) {
        }
        tally.record(ok, "'" + w.str() + "'");
    }
    detail += "random words " + tally.summary();

    bool c_rejected = true;
    for (const char* c : {"C0", "A1 C2"}) {
        try {
            rewrite_finite(Word::parse(c), rules);
            c_rejected = false;
        } catch (const Error& e) {
            c_rejected = c_rejected && e.kind() == ErrorKind::NoRuleConfigured;
        }
    }
    detail += c_rejected ? "; C letters raise NoRuleConfigured" : "; C letters were not rejected";
    return {9, "finite rewriting", tally.failures == 0 && c_rejected, detail};
}

CheckResult arithmetic(std::uint64_t) {
    const auto b = length_bounds(8);
    char buf[64];
    std::snprintf(buf, sizeof buf, "length_bounds(8) = (%g, %g)", b.lower, b.upper);
    return {10, "length bound arithmetic", b.lower == 3.0 && b.upper == 24.0, buf};
}

// ------------------------------------------------------------ classical

void classical_visit(const Element& f, const DyadicAddress& a, std::vector<BlockPair>& out) {
    std::vector<const BlockPair*> inside;
    for (const auto& p : f.pairs()) {
        const auto& s = p.first[0];
        if (s.is_prefix_of(a)) {
            // f is already affine on a.
            out.push_back({DyadicBlock({a}), transport(DyadicBlock({a}), p.first, p.second)});
            return;
        }
        if (a.is_prefix_of(s)) inside.push_back(&p);
    }
    std::optional<std::string> image;
    bool affine = true;
    for (const auto* p : inside) {
        const auto suffix = p->first[0].bits().substr(a.depth());
        const auto& t = p->second[0].bits();
        if (t.size() < suffix.size() || t.compare(t.size() - suffix.size(), suffix.size(), suffix) != 0) {
            affine = false;
            break;
        }
        auto head = t.substr(0, t.size() - suffix.size());
        if (image && *image != head) {
            affine = false;
            break;
        }
        image = std::move(head);
    }
    if (affine && image) {
        out.push_back({DyadicBlock({a}), DyadicBlock({DyadicAddress(*image)})});
        return;
    }
    classical_visit(f, a.child(0), out);
    classical_visit(f, a.child(1), out);
}

}  // namespace

Element classical_reduced_pair(const Element& f) {
    if (f.dim() != 1) throw Error(ErrorKind::DimMismatch, "classical tree pairs need dimension 1");
    std::vector<BlockPair> out;
    classical_visit(f, DyadicAddress(), out);
    return Element::trusted(1, std::move(out));
}

CheckResult run_check(int id, std::uint64_t seed) {
    using Fn = CheckResult (*)(std::uint64_t);
    static const Fn table[kCheckCount] = {confluence,       oracle_agreement, group_axioms,      algebraic_round_trip,
                                          golden_word,      refinement_bound, factorial_count,   dim1_degeneration,
                                          finite_rewriting, arithmetic};
    if (id < 1 || id > kCheckCount) throw Error(ErrorKind::Parse, "no criterion " + std::to_string(id));
    try {
        return table[id - 1](seed);
    } catch (const Error& e) {
        return {id, "criterion " + std::to_string(id), false, std::string("raised ") + e.what()};
    }
}

std::vector<CheckResult> run_checks(std::uint64_t seed) {
    std::vector<CheckResult> out;
    for (int id = 1; id <= kCheckCount; ++id) out.push_back(run_check(id, seed));
    return out;
}

std::string format_check(const CheckResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + " C" + std::to_string(r.id) + " " + r.name + ": " + r.detail;
}

}  // namespace nvgrid
