#pragma once

// Exact dyadic geometry of the unit cube: addresses, blocks, tree-generated
// partitions ("patterns") and the colored binary trees that induce them.
//
// An address is a bit string; the address b_1...b_k denotes the half-open
// interval [i/2^k, (i+1)/2^k) with i the bits read in binary. Appending 0
// takes the lower half, appending 1 the upper half. All arithmetic is done on
// bit strings, so nothing is ever rounded.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvgrid/error.hpp"

namespace nvgrid {

class DyadicAddress {
public:
    DyadicAddress() = default;
    // bits must consist of '0' and '1' only.
    explicit DyadicAddress(std::string bits);

    // Accepts "_" for the empty address.
    static DyadicAddress parse(std::string_view text);

    const std::string& bits() const noexcept { return bits_; }
    std::size_t depth() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    bool is_prefix_of(const DyadicAddress& other) const noexcept;
    // Nested or equal intervals; dyadic intervals are otherwise disjoint.
    bool intersects(const DyadicAddress& other) const noexcept {
        return is_prefix_of(other) || other.is_prefix_of(*this);
    }

    DyadicAddress child(int bit) const;
    DyadicAddress parent() const;
    int last_bit() const;
    int bit(std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }

    std::string str() const { return bits_.empty() ? std::string("_") : bits_; }

    friend bool operator==(const DyadicAddress&, const DyadicAddress&) = default;
    friend std::strong_ordering operator<=>(const DyadicAddress& a, const DyadicAddress& b) {
        return a.bits_ <=> b.bits_;
    }

private:
    std::string bits_;
};

// A dyadic rational in [0,1) written as a finite binary fraction 0.b_1b_2...
// Trailing zeros are stripped, so equal values have equal representations.
class BinaryFraction {
public:
    BinaryFraction() = default;
    explicit BinaryFraction(std::string bits);

    // "p/q" with q a power of two and 0 <= p < q, or "0".
    static BinaryFraction parse(std::string_view text);

    const std::string& bits() const noexcept { return bits_; }
    // p/2^k in lowest terms; falls back to "0b0.<bits>" beyond 63 bits.
    std::string str() const;
    double to_double() const;

    friend bool operator==(const BinaryFraction&, const BinaryFraction&) = default;

private:
    std::string bits_;
};

// Interval [lo, lo + 2^-log2_inv_length).
struct DyadicInterval {
    BinaryFraction lo;
    std::size_t log2_inv_length = 0;

    friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

DyadicInterval interval_from_address(const DyadicAddress& addr);

struct DyadicBlock {
    std::vector<DyadicAddress> coords;

    DyadicBlock() = default;
    explicit DyadicBlock(std::vector<DyadicAddress> c) : coords(std::move(c)) {}

    std::size_t dim() const noexcept { return coords.size(); }
    const DyadicAddress& operator[](std::size_t d) const { return coords[d]; }
    DyadicAddress& operator[](std::size_t d) { return coords[d]; }

    // Sum of coordinate depths; the block has volume 2^-total_depth.
    std::size_t total_depth() const noexcept;
    bool contains(const DyadicBlock& other) const noexcept;
    bool intersects(const DyadicBlock& other) const noexcept;
    // Only meaningful when intersects(other).
    DyadicBlock intersection(const DyadicBlock& other) const;
    DyadicBlock child(std::size_t coord, int bit) const;

    static DyadicBlock whole(std::size_t dim) { return DyadicBlock(std::vector<DyadicAddress>(dim)); }
    static DyadicBlock parse(std::string_view text);
    std::string str() const;

    friend bool operator==(const DyadicBlock&, const DyadicBlock&) = default;
    friend auto operator<=>(const DyadicBlock& a, const DyadicBlock& b) { return a.coords <=> b.coords; }
};

// A tree-generated partition of [0,1)^dim into basic dyadic blocks, stored in
// lexicographic order of the address tuples.
class Pattern {
public:
    Pattern() = default;

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    const std::vector<DyadicBlock>& blocks() const noexcept { return blocks_; }
    const DyadicBlock& operator[](std::size_t i) const { return blocks_[i]; }

    // Index of the block containing `cell`, or size() if none does.
    std::size_t find_containing(const DyadicBlock& cell) const;

    // Sorts but does not validate; for patterns produced by operations that
    // preserve the partition invariant.
    static Pattern trusted(std::size_t dim, std::vector<DyadicBlock> blocks);

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<DyadicBlock> blocks_;
};

// Binary tree whose carets carry the index of the coordinate they halve.
// Stored as a preorder code: -1 for a leaf, the color for a caret.
class ColoredTree {
public:
    ColoredTree() : code_{-1} {}

    static ColoredTree leaf() { return ColoredTree(); }
    static ColoredTree caret(int color, const ColoredTree& lower, const ColoredTree& upper);
    static ColoredTree from_code(std::vector<int> code);

    bool is_leaf() const noexcept { return code_.front() < 0; }
    int color() const { return code_.front(); }
    ColoredTree lower() const;
    ColoredTree upper() const;

    std::size_t caret_count() const noexcept;
    std::size_t leaf_count() const noexcept { return caret_count() + 1; }
    int max_color() const noexcept;
    const std::vector<int>& code() const noexcept { return code_; }

    // Blocks of the induced partition of [0,1)^dim, in leaf order.
    std::vector<DyadicBlock> leaf_blocks(std::size_t dim) const;
    Pattern pattern(std::size_t dim) const;

    // "." for a leaf, "<color>(<lower>,<upper>)" for a caret.
    std::string str() const;
    static ColoredTree parse(std::string_view text);

    friend bool operator==(const ColoredTree&, const ColoredTree&) = default;

private:
    explicit ColoredTree(std::vector<int> code) : code_(std::move(code)) {}
    std::vector<int> code_;
};

// Single-colored tree for one coordinate, held as its ordered leaf addresses
// (a complete prefix code).
class CoordTree {
public:
    CoordTree() : leaves_{DyadicAddress()} {}
    // Throws Parse unless `leaves` is a complete prefix code.
    explicit CoordTree(std::vector<DyadicAddress> leaves);

    static CoordTree from_colored(const ColoredTree& t);
    // All-right tree with `carets` carets: 0, 10, 110, ..., 1^carets.
    static CoordTree spine(std::size_t carets);

    const std::vector<DyadicAddress>& leaves() const noexcept { return leaves_; }
    std::size_t leaf_count() const noexcept { return leaves_.size(); }
    std::size_t caret_count() const noexcept { return leaves_.size() - 1; }
    ColoredTree to_colored(int color) const;

    // Range [first, last) of leaves lying inside the interval `addr`.
    std::pair<std::size_t, std::size_t> leaves_under(const DyadicAddress& addr) const;

    std::string str() const;
    static CoordTree parse(std::string_view text);

    friend bool operator==(const CoordTree&, const CoordTree&) = default;

private:
    std::vector<DyadicAddress> leaves_;
};

Pattern pattern_validate(std::size_t dim, std::vector<DyadicBlock> blocks);

struct Refinement {
    Pattern pattern;
    // origin[k] = (index in p, index in q) of the blocks whose intersection is cell k.
    std::vector<std::pair<std::size_t, std::size_t>> origin;
};

Refinement common_refinement(const Pattern& p, const Pattern& q);

// Guillotine tree preferring the smallest crossing-free coordinate at each node.
ColoredTree canonical_tree(const Pattern& p);

struct ProductPattern {
    Pattern pattern;
    // Copies of the coordinate d+1 tree hang from every leaf of the coordinate d tree.
    ColoredTree tree;
};

ProductPattern product_pattern(std::span<const CoordTree> parts);

std::string format_pattern(const Pattern& p);
Pattern parse_pattern(std::string_view text);

}  // namespace nvgrid
