#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nvgrid/dyadic.hpp"
#include "nvgrid/random.hpp"

using namespace nvgrid;

namespace {

DyadicBlock blk(std::string_view s) { return DyadicBlock::parse(s); }

ErrorKind kind_of(std::size_t dim, std::vector<DyadicBlock> blocks) {
    try {
        pattern_validate(dim, std::move(blocks));
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a validation error");
    return ErrorKind::ContractViolation;
}

}  // namespace

TEST_CASE("addresses denote half-open dyadic intervals") {
    auto root = interval_from_address(DyadicAddress());
    CHECK(root.lo.str() == "0");
    CHECK(root.log2_inv_length == 0);

    auto a = interval_from_address(DyadicAddress("01"));
    CHECK(a.lo.str() == "1/4");
    CHECK(a.log2_inv_length == 2);

    auto b = interval_from_address(DyadicAddress("110"));
    CHECK(b.lo.str() == "3/4");
    CHECK(b.log2_inv_length == 3);
}

TEST_CASE("prefix order is nesting") {
    DyadicAddress a("01"), b("011"), c("10");
    CHECK(a.is_prefix_of(b));
    CHECK(a.intersects(b));
    CHECK(b.intersects(a));
    CHECK_FALSE(a.intersects(c));
    CHECK(b.parent() == a);
    CHECK(a.child(1) == b);
    CHECK(b.last_bit() == 1);
    CHECK(DyadicAddress::parse("_").empty());
    CHECK_THROWS_AS(DyadicAddress::parse("012"), Error);
}

TEST_CASE("binary fractions") {
    CHECK(BinaryFraction::parse("3/8").bits() == "011");
    CHECK(BinaryFraction::parse("4/8").str() == "1/2");
    CHECK(BinaryFraction::parse("0").str() == "0");
    CHECK(BinaryFraction("0100").bits() == "01");
    CHECK(BinaryFraction::parse("3/8").to_double() == doctest::Approx(0.375));
    CHECK_THROWS_AS(BinaryFraction::parse("1/3"), Error);
    CHECK_THROWS_AS(BinaryFraction::parse("5/4"), Error);
    std::string deep(70, '0');
    deep.back() = '1';
    CHECK(BinaryFraction(deep).str().rfind("0b0.", 0) == 0);
}

TEST_CASE("blocks") {
    auto b = blk("0,11");
    CHECK(b.dim() == 2);
    CHECK(b.total_depth() == 3);
    CHECK(b.str() == "0,11");
    CHECK(DyadicBlock::whole(2).contains(b));
    CHECK(blk("_,1").intersects(b));
    CHECK(blk("_,1").intersection(blk("0,_")) == blk("0,1"));
    CHECK_FALSE(blk("1,_").intersects(b));
    CHECK(b.child(0, 1) == blk("01,11"));
}

TEST_CASE("pattern validation accepts tree-generated partitions") {
    auto p = pattern_validate(1, {blk("_")});
    CHECK(p.size() == 1);

    auto q = pattern_validate(2, {blk("_,0"), blk("0,1"), blk("1,1")});
    CHECK(q.size() == 3);
    // Coordinate 0 is crossed by the bottom block, so the first cut is coordinate 1.
    CHECK(canonical_tree(q).str() == "1(.,0(.,.))");
    // Stored in lexicographic order.
    CHECK(q[0] == blk("_,0"));
}

TEST_CASE("pattern validation diagnoses failures") {
    CHECK(kind_of(2, {blk("0,_"), blk("0,_")}) == ErrorKind::Overlap);
    CHECK(kind_of(2, {blk("0,_"), blk("00,1")}) == ErrorKind::Overlap);
    CHECK(kind_of(2, {blk("0,_"), blk("1,0")}) == ErrorKind::Gap);
    CHECK(kind_of(1, {}) == ErrorKind::Gap);
    CHECK_THROWS_AS(pattern_validate(2, {blk("_")}), Error);
}

TEST_CASE("common refinement") {
    auto p = pattern_validate(1, {blk("0"), blk("1")});
    auto q = pattern_validate(1, {blk("00"), blk("01"), blk("1")});
    auto r = common_refinement(p, q);
    REQUIRE(r.pattern.size() == 3);
    CHECK(r.pattern[0] == blk("00"));
    CHECK(r.pattern[1] == blk("01"));
    CHECK(r.pattern[2] == blk("1"));
    CHECK(r.origin[1] == std::pair<std::size_t, std::size_t>{0, 1});

    CHECK(common_refinement(q, q).pattern == q);

    auto v = pattern_validate(2, {blk("0,_"), blk("1,_")});
    auto h = pattern_validate(2, {blk("_,0"), blk("_,1")});
    auto grid = common_refinement(v, h).pattern;
    CHECK(grid.blocks() == std::vector<DyadicBlock>{blk("0,0"), blk("0,1"), blk("1,0"), blk("1,1")});
}

TEST_CASE("common refinement of random patterns covers both") {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        std::vector<DyadicBlock> a{DyadicBlock::whole(3)}, b{DyadicBlock::whole(3)};
        for (auto* v : {&a, &b})
            for (int k = 0; k < 8; ++k) {
                auto j = uniform_below(rng, v->size());
                auto d = uniform_below(rng, 3);
                auto blkj = (*v)[j];
                (*v)[j] = blkj.child(d, 0);
                v->push_back(blkj.child(d, 1));
            }
        auto p = pattern_validate(3, a), q = pattern_validate(3, b);
        auto r = common_refinement(p, q);
        // Refinement of a partition is a partition.
        CHECK_NOTHROW(pattern_validate(3, r.pattern.blocks()));
        for (std::size_t k = 0; k < r.pattern.size(); ++k) {
            CHECK(p[r.origin[k].first].contains(r.pattern[k]));
            CHECK(q[r.origin[k].second].contains(r.pattern[k]));
        }
    }
}

TEST_CASE("canonical tree") {
    CHECK(canonical_tree(pattern_validate(2, {DyadicBlock::whole(2)})).is_leaf());
    auto grid = pattern_validate(2, {blk("0,0"), blk("0,1"), blk("1,0"), blk("1,1")});
    CHECK(canonical_tree(grid).str() == "0(1(.,.),1(.,.))");
    // Inducing the pattern back gives the same blocks.
    CHECK(canonical_tree(grid).pattern(2) == grid);
}

TEST_CASE("colored trees") {
    auto t = ColoredTree::parse("0(1(.,.),.)");
    CHECK(t.caret_count() == 2);
    CHECK(t.leaf_count() == 3);
    CHECK(t.max_color() == 1);
    CHECK(t.lower().str() == "1(.,.)");
    CHECK(t.upper().is_leaf());
    CHECK(t.leaf_blocks(2) == std::vector<DyadicBlock>{blk("0,0"), blk("0,1"), blk("1,_")});
    CHECK(ColoredTree::caret(0, ColoredTree::caret(1, ColoredTree::leaf(), ColoredTree::leaf()), ColoredTree::leaf()) == t);
    CHECK_THROWS_AS(ColoredTree::parse("0(.,"), Error);
}

TEST_CASE("coordinate trees") {
    auto s = CoordTree::spine(3);
    CHECK(s.str() == "0 10 110 111");
    CHECK(CoordTree::from_colored(s.to_colored(0)) == s);
    CHECK(CoordTree::from_colored(ColoredTree::leaf()) == CoordTree());
    CHECK(s.leaves_under(DyadicAddress("1")) == std::pair<std::size_t, std::size_t>{1, 4});
    CHECK_THROWS_AS(CoordTree::parse("0 10"), Error);
    CHECK_THROWS_AS(CoordTree::parse("0 0 1"), Error);
}

TEST_CASE("product patterns") {
    std::vector<CoordTree> trivial(2);
    CHECK(product_pattern(trivial).pattern.size() == 1);

    std::vector<CoordTree> one{CoordTree::parse("0 1"), CoordTree::parse("0 1")};
    auto pp = product_pattern(one);
    CHECK(pp.pattern.size() == 4);
    CHECK(pp.tree.str() == "0(1(.,.),1(.,.))");
    CHECK(pp.tree.leaf_blocks(2) == pp.pattern.blocks());
}

TEST_CASE("pattern text round trip") {
    auto p = pattern_validate(2, {blk("_,0"), blk("0,1"), blk("1,1")});
    CHECK(parse_pattern(format_pattern(p)) == p);
    CHECK_THROWS_AS(parse_pattern(""), Error);
}
