#pragma once

// Algebraic normal forms for 2V over the infinite generating set
// {A_i, B_i, C_i, P_i, Q_i} (P = Pi, Q = Pi-bar), and rewriting toward the
// finite set {A0, A1, B0, B1, P0, Q0, P1, Q1}.
//
// Words are read left to right in diagrammatic order: the first letter acts
// first, matching compose(f, g) = "f, then g". The interpreter is the
// ground truth; every emission routine is checked against it.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nvgrid/dyadic.hpp"
#include "nvgrid/element.hpp"
#include "nvgrid/grid.hpp"

namespace nvgrid {

enum class Family { A, B, C, P, Q };

char family_letter(Family f);

struct Generator {
    Family family = Family::A;
    std::size_t index = 0;
    long exponent = 1;

    std::string str() const;
    friend bool operator==(const Generator&, const Generator&) = default;
};

class Word {
public:
    Word() = default;
    Word(std::initializer_list<Generator> letters) : letters_(letters) {}
    explicit Word(std::vector<Generator> letters) : letters_(std::move(letters)) {}

    // Tokens X<idx> or X<idx>^<signed exponent>, whitespace separated;
    // lines starting with '#' are skipped.
    static Word parse(std::string_view text);

    const std::vector<Generator>& letters() const noexcept { return letters_; }
    std::size_t size() const noexcept { return letters_.size(); }
    bool empty() const noexcept { return letters_.empty(); }
    void push_back(Generator g) { letters_.push_back(g); }
    void append(const Word& w) { letters_.insert(letters_.end(), w.letters_.begin(), w.letters_.end()); }

    // Drops zero exponents and merges adjacent letters with the same
    // family and index until nothing changes.
    Word reduced() const;
    Word inverse() const;

    // Renders every letter, zero exponents included.
    std::string str() const;

    friend bool operator==(const Word&, const Word&) = default;

private:
    std::vector<Generator> letters_;
};

// Exponent of each leaf along its maximal chain of lower-child steps through
// carets of `color` that stay off the right arm of the tree.
std::vector<std::size_t> leaf_exponents(const ColoredTree& t, int color);

// Adds k to every index; throws NegativeIndex if one would drop below 0.
Word shift(const Word& w, long k);

// Conventions of the generator table. The defaults are the ones the emission
// routines are verified against; flipping either one breaks the contract.
struct GeneratorConventions {
    // Lower child of a caret is the half with smaller coordinate values.
    bool lower_child_is_smaller_half = true;
    // A_0 maps [0,1/4) onto [0,1/2) in coordinate 0 (left-nested tree onto
    // the all-right tree); false swaps every A/B/C letter for its inverse.
    bool base_map_expands = true;
};

Element generator_element(const Generator& g, const GeneratorConventions& conv = {});
Element interpret(const Word& w, const GeneratorConventions& conv = {});

// Tree pattern -> all-right coordinate-0 tree, order preserving, dim 2.
Element positive_element(const ColoredTree& t);
// Leaf k of the all-right m-leaf tree goes to leaf perm[k], dim 2.
Element permutation_element(const std::vector<std::size_t>& perm);

// Positive word of a source-gridded dim-2 diagram read off the coordinate
// trees. With `verbose`, every leaf contributes a letter (zeros kept).
Word emit_positive(const std::vector<CoordTree>& coord_trees, bool verbose = false);
Word emit_positive(const ReducedGridDiagram& rgd, bool verbose = false);

// Positive word of (t -> all-right tree) by recoloring the spine top-down
// with C letters and then removing off-spine carets, largest leaf first.
Word emit_tree_word(const ColoredTree& t);

// Bubble sort into adjacent transpositions of the all-right m-leaf tree:
// P_{m-2} swaps the last two leaves, Q_i swaps leaves i and i+1 otherwise.
Word perm_word(const std::vector<std::size_t>& perm);

struct NormalForm {
    Word positive;
    Word permutation;
    Word negative;  // N; the normal form uses N^-1

    Word word() const;
};

NormalForm normal_form_parts(const Element& f, bool verbose = false);
Word normal_form(const Element& f, bool verbose = false);
// Normal form built from the target-gridded diagram: inverse of the
// normal form of f^-1.
Word normal_form_target(const Element& f);

// Rewriting rules X_i := word, each verified by the equality oracle when
// added. Defaults: X_i := A0^-1 X_{i-1} A0 for X in {A, B, P, Q}, 2 <= i <= max_index.
class RuleTable {
public:
    static RuleTable defaults(std::size_t max_index = 64);
    static RuleTable empty() { return RuleTable(); }
    // Lines "X<i> := <word>"; appended to `base`, each one verified.
    static RuleTable parse(std::string_view text, RuleTable base = defaults());

    // Throws RuleVerificationFailed unless interpret(lhs) == interpret(rhs).
    void add(const Generator& lhs, const Word& rhs);
    std::optional<Word> lookup(Family family, std::size_t index) const;
    std::size_t size() const noexcept { return rules_.size(); }

    static bool in_finite_set(const Generator& g);

private:
    std::map<std::pair<Family, std::size_t>, Word> rules_;
};

struct Rewrite {
    Word word;
    std::vector<std::string> trace;
};

// Throws NoRuleConfigured for letters outside the finite set without a rule.
Rewrite rewrite_finite(const Word& w, const RuleTable& rules);
Word rewrite_finite(const Word& w);

}  // namespace nvgrid
