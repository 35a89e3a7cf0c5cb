#pragma once

// Elements of nV: bijections of [0,1)^n that map the i-th block of a source
// pattern onto the i-th block of a target pattern by the coordinate-wise
// increasing affine map. On addresses that map is prefix replacement.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvgrid/dyadic.hpp"
#include "nvgrid/random.hpp"

namespace nvgrid {

using BlockPair = std::pair<DyadicBlock, DyadicBlock>;
using Point = std::vector<BinaryFraction>;

class Element {
public:
    Element() = default;

    static Element identity(std::size_t dim);
    // Skips validation; pairs are sorted by source block.
    static Element trusted(std::size_t dim, std::vector<BlockPair> pairs);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return pairs_.size(); }
    const std::vector<BlockPair>& pairs() const noexcept { return pairs_; }

    Pattern source_pattern() const;
    Pattern target_pattern() const;

    // Same representative, block for block. Use equals() for the group element.
    friend bool operator==(const Element&, const Element&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<BlockPair> pairs_;
};

Element element_new(std::vector<BlockPair> pairs);
// Source block i goes to target block match[i].
Element element_from_matching(const Pattern& source, const Pattern& target, const std::vector<std::size_t>& match);

// Image of `cell` (inside `from`) under the affine map from -> to.
DyadicBlock transport(const DyadicBlock& cell, const DyadicBlock& from, const DyadicBlock& to);

// Apply f, then g.
Element compose(const Element& f, const Element& g);
Element invert(const Element& f);
Point evaluate(const Element& f, const Point& x);
// Decides equality of the underlying maps via the common refinement of
// the two source patterns.
bool equals(const Element& f, const Element& g);

// Split pair `index` at the midline of `coord` on both sides.
Element refine_cell(const Element& f, std::size_t index, std::size_t coord);
Element random_refinement(const Element& f, Rng& rng, std::size_t splits);

// Random tree of `carets` carets by uniform leaf splitting with uniform colors.
std::vector<DyadicBlock> random_tree_blocks(Rng& rng, std::size_t dim, std::size_t carets);
Element random_element(std::uint64_t seed, std::size_t dim, std::size_t caret_budget);
Element random_element(Rng& rng, std::size_t dim, std::size_t caret_budget);

std::string format_element(const Element& f);
Element parse_element(std::string_view text);
Point parse_point(std::string_view text);
std::string format_point(const Point& x);

}  // namespace nvgrid
