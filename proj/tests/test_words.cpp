#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nvgrid/words.hpp"

using namespace nvgrid;

namespace {

DyadicBlock blk(std::string_view s) { return DyadicBlock::parse(s); }
Word W(std::string_view s) { return Word::parse(s); }
Point pt(std::string_view s) { return parse_point(s); }

const char* kGolden = "C1 C2 C3 A0 B0^2 B2^2 B4 A6^2 B6^2 B8^2 B10 B12^2 B14^2 B16 B18^2 B20^2 B22 B24 B26";

std::vector<CoordTree> reference_trees() {
    return {CoordTree::parse("00 0100 0101 011 1"), CoordTree::parse("00 01 100 101 110 111")};
}

}  // namespace

TEST_CASE("word syntax") {
    auto w = W("A0 B12^-3 C1^+2 P0^0");
    REQUIRE(w.size() == 4);
    CHECK(w.letters()[1] == Generator{Family::B, 12, -3});
    CHECK(w.letters()[2].exponent == 2);
    CHECK(w.str() == "A0 B12^-3 C1^2 P0^0");
    CHECK(W("# comment\nA1\n\nA1").str() == "A1 A1");
    CHECK_THROWS_AS(W("D0"), Error);
    CHECK_THROWS_AS(W("A"), Error);
    CHECK_THROWS_AS(W("A1^"), Error);
    CHECK_THROWS_AS(W("A1x"), Error);
}

TEST_CASE("free reduction and inverse") {
    CHECK(W("A0 A0^2 B1^0 B1 B1^-1 P0").reduced().str() == "A0^3 P0");
    CHECK(W("A0 A1 A1^-1 A0^-1").reduced().empty());
    CHECK(W("A0 B1^2").inverse().str() == "B1^-2 A0^-1");
}

TEST_CASE("shift") {
    CHECK(shift(Word(), 5).empty());
    CHECK(shift(W("B0^2 B2^2 B4"), 6).str() == "B6^2 B8^2 B10");
    auto w = W("A3 P4^-1 Q5");
    CHECK(shift(shift(w, 3), -3) == w);
    CHECK_THROWS_AS(shift(W("A1"), -2), Error);
}

TEST_CASE("leaf exponents") {
    CHECK(leaf_exponents(CoordTree::spine(4).to_colored(0), 0) == std::vector<std::size_t>(5, 0));
    CHECK(leaf_exponents(CoordTree::parse("00 01 1").to_colored(0), 0) == std::vector<std::size_t>{1, 0, 0});
    CHECK(leaf_exponents(reference_trees()[0].to_colored(0), 0) == std::vector<std::size_t>{1, 2, 0, 0, 0});
    // Only carets of the requested color count.
    CHECK(leaf_exponents(CoordTree::parse("00 01 1").to_colored(1), 0) == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("generator table") {
    auto p0 = generator_element({Family::P, 0, 1});
    CHECK(p0 == element_new({{blk("0,_"), blk("1,_")}, {blk("1,_"), blk("0,_")}}));
    auto c0 = generator_element({Family::C, 0, 1});
    CHECK(c0 == element_new({{blk("_,0"), blk("0,_")}, {blk("_,1"), blk("1,_")}}));
    auto a0 = generator_element({Family::A, 0, 1});
    CHECK(evaluate(a0, pt("1/8,1/2")) == pt("1/4,1/2"));
    auto b1 = generator_element({Family::B, 1, 1});
    CHECK(b1.source_pattern().blocks() == std::vector<DyadicBlock>{blk("0,_"), blk("10,0"), blk("10,1"), blk("11,_")});
    auto q0 = generator_element({Family::Q, 0, 1});
    CHECK(evaluate(q0, pt("1/4,0")) == pt("5/8,0"));
    CHECK(evaluate(q0, pt("1/2,0")) == pt("0,0"));
    CHECK(evaluate(q0, pt("7/8,0")) == pt("7/8,0"));
    CHECK(equals(generator_element({Family::A, 2, -2}), invert(compose(generator_element({Family::A, 2, 1}), generator_element({Family::A, 2, 1})))));
}

TEST_CASE("generator conventions") {
    GeneratorConventions contract;
    GeneratorConventions flipped;
    flipped.base_map_expands = false;
    CHECK(equals(generator_element({Family::A, 0, 1}, flipped), invert(generator_element({Family::A, 0, 1}, contract))));
    // The emitted words are only correct under the default conventions.
    auto pos = positive_element(CoordTree::parse("00 01 1").to_colored(0));
    CHECK(equals(interpret(W("A0"), contract), pos));
    CHECK_FALSE(equals(interpret(W("A0"), flipped), pos));
    GeneratorConventions mirror;
    mirror.lower_child_is_smaller_half = false;
    CHECK_FALSE(equals(interpret(W("A0"), mirror), pos));
}

TEST_CASE("interpret") {
    CHECK(interpret(Word()) == Element::identity(2));
    CHECK(equals(interpret(W("P0 P0")), Element::identity(2)));
    CHECK(equals(interpret(W("A0 A0^-1 C3 C3^-1")), Element::identity(2)));
    auto rgd = canon(interpret(W("A0")));
    CHECK(rgd.diagram.cells.size() == 3);
    CHECK(rgd.caret_count == 2);
    CHECK(equals(interpret(W("A1 B0")), compose(generator_element({Family::A, 1, 1}), generator_element({Family::B, 0, 1}))));
}

TEST_CASE("emit_positive") {
    CHECK(emit_positive(std::vector<CoordTree>(2)).empty());
    CHECK(emit_positive({CoordTree::parse("0 1"), CoordTree()}).empty());
    CHECK(emit_positive(reference_trees()).str() == kGolden);
    auto verbose = emit_positive(reference_trees(), true);
    CHECK(verbose.reduced() == emit_positive(reference_trees()));
    CHECK(emit_positive({reference_trees()[0], CoordTree()}, true).str() == "A0 A1^2 A2^0 A3^0 A4^0");
    CHECK_THROWS_AS(emit_positive(std::vector<CoordTree>(3)), Error);
}

TEST_CASE("emission contract on the reference trees") {
    auto tree = product_pattern(reference_trees()).tree;
    auto w = emit_positive(reference_trees());
    CHECK(equals(interpret(w), positive_element(tree)));
    CHECK(emit_tree_word(tree) == w);
}

TEST_CASE("emit_tree_word") {
    CHECK(emit_tree_word(CoordTree::spine(5).to_colored(0)).empty());
    CHECK(emit_tree_word(ColoredTree::parse("1(.,.)")).str() == "C0");
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        auto t = canonical_tree(Pattern::trusted(2, random_tree_blocks(rng, 2, 1 + uniform_below(rng, 12))));
        CHECK(equals(interpret(emit_tree_word(t)), positive_element(t)));
    }
}

TEST_CASE("emit_tree_word agrees with emit_positive on grids") {
    Rng rng(6);
    for (int i = 0; i < 100; ++i) {
        auto rgd = canon(random_element(rng, 2, 1 + uniform_below(rng, 10)));
        CHECK(emit_tree_word(rgd.diagram.composite_tree()) == emit_positive(rgd));
    }
}

TEST_CASE("perm_word") {
    CHECK(perm_word({0, 1, 2}).empty());
    CHECK(perm_word({1, 0}).str() == "P0");
    CHECK(perm_word({1, 2, 0}).str() == "P1 Q0");
    CHECK(equals(interpret(perm_word({1, 2, 0})), permutation_element({1, 2, 0})));
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        std::vector<std::size_t> perm(2 + uniform_below(rng, 7));
        for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = k;
        for (std::size_t k = perm.size(); k > 1; --k) std::swap(perm[k - 1], perm[uniform_below(rng, k)]);
        CHECK(equals(interpret(perm_word(perm)), permutation_element(perm)));
    }
}

TEST_CASE("normal forms") {
    CHECK(normal_form(Element::identity(2)).empty());
    CHECK(normal_form(generator_element({Family::P, 0, 1})).str() == "P0");
    CHECK(normal_form(interpret(W("C0"))).str() == "C0");
    CHECK_THROWS_AS(normal_form(Element::identity(3)), Error);

    Rng rng(10);
    for (int i = 0; i < 200; ++i) {
        auto f = random_element(rng, 2, 1 + uniform_below(rng, 10));
        auto parts = normal_form_parts(f);
        CHECK(equals(interpret(parts.word()), f));
        CHECK(equals(interpret(normal_form_target(f)), f));
        CHECK(normal_form(random_refinement(f, rng, 4)) == parts.word());
        CHECK(equals(interpret(normal_form(f, true)), f));
    }
}

TEST_CASE("rewriting") {
    CHECK(rewrite_finite(W("A1")).str() == "A1");
    CHECK(rewrite_finite(W("A2")).str() == "A0^-1 A1 A0");
    CHECK_THROWS_AS(rewrite_finite(W("C0")), Error);
    try {
        rewrite_finite(W("C0"));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoRuleConfigured);
    }
    auto r = rewrite_finite(W("B3^-2 Q4"), RuleTable::defaults(8));
    for (const auto& g : r.word.letters()) CHECK(RuleTable::in_finite_set(g));
    CHECK(r.trace.back().rfind("verified", 0) == 0);
    CHECK(equals(interpret(r.word), interpret(W("B3^-2 Q4"))));
}

TEST_CASE("rule tables") {
    auto table = RuleTable::defaults(4);
    CHECK(table.size() == 12);
    CHECK(table.lookup(Family::A, 3)->str() == "A0^-1 A2 A0");
    CHECK_FALSE(table.lookup(Family::C, 2).has_value());
    // A custom rule for C letters makes them rewritable.
    auto extended = RuleTable::parse("C2 := A0^-1 C1 A0\n", RuleTable::empty());
    CHECK(extended.size() == 1);
    CHECK(extended.lookup(Family::C, 2)->str() == "A0^-1 C1 A0");
    // C1 is outside the finite set and still has no rule.
    CHECK_THROWS_AS(rewrite_finite(W("C2"), extended), Error);
    // C0 acts on the whole square, so the shift relation starts at index 2.
    CHECK_THROWS_AS(RuleTable::parse("C1 := A0^-1 C0 A0\n", RuleTable::empty()), Error);
    CHECK_THROWS_AS(RuleTable::parse("A2 := A1\n", RuleTable::empty()), Error);
    try {
        RuleTable::parse("A2 := A1\n", RuleTable::empty());
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RuleVerificationFailed);
    }
    CHECK_THROWS_AS(RuleTable::parse("A2 A3 := A1\n", RuleTable::empty()), Error);
}
