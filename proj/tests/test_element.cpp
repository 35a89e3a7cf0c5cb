#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nvgrid/element.hpp"

using namespace nvgrid;

namespace {

DyadicBlock blk(std::string_view s) { return DyadicBlock::parse(s); }

Point pt(std::string_view s) { return parse_point(s); }

// Bottom half -> left half, top half -> right half.
Element c0_type() { return element_new({{blk("_,0"), blk("0,_")}, {blk("_,1"), blk("1,_")}}); }

// Coordinate 0 doubles on [0,1/4).
Element a0_type() { return element_new({{blk("00,_"), blk("0,_")}, {blk("01,_"), blk("10,_")}, {blk("1,_"), blk("11,_")}}); }

// All dyadic points of depth `depth` in [0,1)^dim.
std::vector<Point> lattice(std::size_t dim, std::size_t depth) {
    std::vector<Point> out{Point{}};
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<Point> next;
        for (const auto& p : out)
            for (std::size_t i = 0; i < (std::size_t(1) << depth); ++i) {
                std::string bits;
                for (std::size_t k = depth; k-- > 0;) bits += (i >> k) & 1 ? '1' : '0';
                auto q = p;
                q.emplace_back(bits);
                next.push_back(q);
            }
        out = std::move(next);
    }
    return out;
}

}  // namespace

TEST_CASE("construction") {
    auto id = element_new({{blk("_,_"), blk("_,_")}});
    CHECK(id == Element::identity(2));
    CHECK(id.size() == 1);
    CHECK_THROWS_AS(element_new({{blk("0"), blk("0")}, {blk("0"), blk("1")}}), Error);
    try {
        element_new({{blk("0"), blk("0")}, {blk("0"), blk("1")}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Overlap);
    }
    auto src = pattern_validate(1, {blk("0"), blk("1")});
    auto tgt = pattern_validate(1, {blk("_")});
    CHECK_THROWS_AS(element_from_matching(src, tgt, {0, 0}), Error);
    auto swap = element_from_matching(src, src, {1, 0});
    CHECK(evaluate(swap, pt("1/4")) == pt("3/4"));
}

TEST_CASE("evaluate") {
    CHECK(evaluate(Element::identity(2), pt("3/8,5/8")) == pt("3/8,5/8"));
    CHECK(evaluate(c0_type(), pt("1/2,1/4")) == pt("1/4,1/2"));
    CHECK(evaluate(a0_type(), pt("1/8,1/2")) == pt("1/4,1/2"));
    CHECK(format_point(evaluate(a0_type(), pt("3/4,0"))) == "7/8,0");
    CHECK_THROWS_AS(evaluate(a0_type(), pt("1/2")), Error);
}

TEST_CASE("invert") {
    CHECK(invert(Element::identity(2)) == Element::identity(2));
    auto inv = invert(c0_type());
    // Left half goes to the bottom half.
    CHECK(evaluate(inv, pt("1/4,1/2")) == pt("1/2,1/4"));
    auto f = random_element(5, 3, 9);
    CHECK(invert(invert(f)) == f);
}

TEST_CASE("compose in diagrammatic order") {
    // x0 on [0,1): 00 -> 0, 01 -> 10, 1 -> 11.
    auto x0 = element_new({{blk("00"), blk("0")}, {blk("01"), blk("10")}, {blk("1"), blk("11")}});
    auto xx = compose(x0, x0);
    CHECK(xx.source_pattern().blocks() == std::vector<DyadicBlock>{blk("000"), blk("001"), blk("01"), blk("1")});
    for (const auto& x : lattice(1, 4)) CHECK(evaluate(xx, x) == evaluate(x0, evaluate(x0, x)));

    auto f = random_element(1, 2, 7), g = random_element(2, 2, 7);
    auto fg = compose(f, g);
    for (const auto& x : lattice(2, 3)) CHECK(evaluate(fg, x) == evaluate(g, evaluate(f, x)));
}

TEST_CASE("compose with identity and inverse") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto f = random_element(seed, 1 + seed % 3, 6);
        auto id = Element::identity(f.dim());
        CHECK(equals(compose(id, f), f));
        CHECK(equals(compose(f, id), f));
        CHECK(equals(compose(f, invert(f)), id));
    }
    CHECK_THROWS_AS(compose(Element::identity(1), Element::identity(2)), Error);
}

TEST_CASE("equality oracle") {
    auto f = random_element(3, 2, 8);
    CHECK(equals(f, f));
    CHECK(equals(f, refine_cell(refine_cell(f, 0, 1), 2, 0)));
    CHECK_FALSE(equals(Element::identity(2), c0_type()));
    CHECK_FALSE(equals(a0_type(), invert(a0_type())));
}

TEST_CASE("refinement preserves the map") {
    Rng rng(9);
    for (int i = 0; i < 30; ++i) {
        auto f = random_element(rng, 2, 5);
        auto r = random_refinement(f, rng, 6);
        CHECK(r.size() == f.size() + 6);
        CHECK(equals(f, r));
        for (const auto& x : lattice(2, 2)) CHECK(evaluate(f, x) == evaluate(r, x));
    }
}

TEST_CASE("random elements") {
    CHECK(random_element(42, 2, 0) == Element::identity(2));
    CHECK(random_element(42, 3, 12) == random_element(42, 3, 12));
    CHECK_FALSE(random_element(42, 3, 12) == random_element(43, 3, 12));
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto f = random_element(seed, 2, 10);
        CHECK(f.size() == 11);
        CHECK_NOTHROW(pattern_validate(2, f.source_pattern().blocks()));
        CHECK_NOTHROW(pattern_validate(2, f.target_pattern().blocks()));
    }
}

TEST_CASE("element text format") {
    auto f = random_element(17, 2, 6);
    auto text = format_element(f);
    CHECK(text.rfind("dim 2\n", 0) == 0);
    CHECK(parse_element(text) == f);
    CHECK(parse_element("# comment\ndim 1\n\n0 -> 1\n1 -> 0\n") == invert(parse_element("dim 1\n1 -> 0\n0 -> 1\n")));
    CHECK_THROWS_AS(parse_element("dim 2\n0 -> 1\n"), Error);
    CHECK_THROWS_AS(parse_element("dim x\n"), Error);
    CHECK_THROWS_AS(parse_element("dim 1\n0 1\n"), Error);
    try {
        parse_element("dim 1\n0 -> 0\n");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Gap);
    }
}
