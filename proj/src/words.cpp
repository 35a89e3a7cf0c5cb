#include "nvgrid/words.hpp"

#include <algorithm>
#include <charconv>

#include "text.hpp"

namespace nvgrid {

char family_letter(Family f) {
    switch (f) {
        case Family::A: return 'A';
        case Family::B: return 'B';
        case Family::C: return 'C';
        case Family::P: return 'P';
        case Family::Q: return 'Q';
    }
    return '?';
}

std::string Generator::str() const {
    std::string out = family_letter(family) + std::to_string(index);
    if (exponent != 1) out += "^" + std::to_string(exponent);
    return out;
}

// ---------------------------------------------------------------- words

namespace {

Generator parse_letter(std::string_view tok) {
    Generator g;
    switch (tok.empty() ? '\0' : tok.front()) {
        case 'A': g.family = Family::A; break;
        case 'B': g.family = Family::B; break;
        case 'C': g.family = Family::C; break;
        case 'P': g.family = Family::P; break;
        case 'Q': g.family = Family::Q; break;
        default: throw Error(ErrorKind::Parse, "unknown letter '" + std::string(tok) + "'");
    }
    const char* p = tok.data() + 1;
    const char* end = tok.data() + tok.size();
    auto idx = std::from_chars(p, end, g.index);
    if (idx.ptr == p || idx.ec != std::errc()) throw Error(ErrorKind::Parse, "missing index in '" + std::string(tok) + "'");
    p = idx.ptr;
    if (p != end) {
        if (*p != '^') throw Error(ErrorKind::Parse, "bad token '" + std::string(tok) + "'");
        ++p;
        if (p != end && *p == '+') ++p;
        auto ex = std::from_chars(p, end, g.exponent);
        if (ex.ptr != end || ex.ptr == p) throw Error(ErrorKind::Parse, "bad exponent in '" + std::string(tok) + "'");
    }
    return g;
}

bool same_letter(const Generator& a, const Generator& b) { return a.family == b.family && a.index == b.index; }

}  // namespace

Word Word::parse(std::string_view body) {
    Word w;
    for (auto line : text::content_lines(body))
        for (auto tok : text::tokens(line)) w.push_back(parse_letter(tok));
    return w;
}

Word Word::reduced() const {
    std::vector<Generator> out;
    for (const auto& g : letters_) {
        if (g.exponent == 0) continue;
        if (!out.empty() && same_letter(out.back(), g)) {
            out.back().exponent += g.exponent;
            if (out.back().exponent == 0) out.pop_back();
        } else {
            out.push_back(g);
        }
    }
    return Word(std::move(out));
}

Word Word::inverse() const {
    std::vector<Generator> out(letters_.rbegin(), letters_.rend());
    for (auto& g : out) g.exponent = -g.exponent;
    return Word(std::move(out));
}

std::string Word::str() const {
    std::string out;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) out += ' ';
        out += letters_[i].str();
    }
    return out;
}

Word shift(const Word& w, long k) {
    std::vector<Generator> out = w.letters();
    for (auto& g : out) {
        long idx = long(g.index) + k;
        if (idx < 0) throw Error(ErrorKind::NegativeIndex, "shift of " + g.str() + " by " + std::to_string(k));
        g.index = std::size_t(idx);
    }
    return Word(std::move(out));
}

// ---------------------------------------------------------------- trees

namespace {

// Pointer-free node arrays for a colored tree.
struct Nodes {
    std::vector<int> color;  // -1 for leaves
    std::vector<int> lower, upper, parent;
    std::vector<int> leaves;  // node ids in leaf order

    explicit Nodes(const ColoredTree& t) {
        const auto& code = t.code();
        std::vector<std::pair<int, int>> stack;  // (node, children seen)
        for (int c : code) {
            int id = int(color.size());
            color.push_back(c);
            lower.push_back(-1);
            upper.push_back(-1);
            parent.push_back(stack.empty() ? -1 : stack.back().first);
            if (!stack.empty()) {
                auto& top = stack.back();
                (top.second == 0 ? lower : upper)[std::size_t(top.first)] = id;
                ++top.second;
            }
            if (c < 0)
                leaves.push_back(id);
            else
                stack.push_back({id, 0});
            while (!stack.empty() && stack.back().second == 2) stack.pop_back();
        }
    }

    std::vector<bool> right_arm() const {
        std::vector<bool> arm(color.size(), false);
        for (int n = 0; n >= 0; n = upper[std::size_t(n)]) arm[std::size_t(n)] = true;
        return arm;
    }
};

}  // namespace

std::vector<std::size_t> leaf_exponents(const ColoredTree& t, int color) {
    Nodes nodes(t);
    auto arm = nodes.right_arm();
    std::vector<std::size_t> out;
    for (int leaf : nodes.leaves) {
        std::size_t count = 0;
        int n = leaf;
        while (true) {
            int p = nodes.parent[std::size_t(n)];
            if (p < 0 || nodes.lower[std::size_t(p)] != n || nodes.color[std::size_t(p)] != color || arm[std::size_t(p)])
                break;
            ++count;
            n = p;
        }
        out.push_back(count);
    }
    return out;
}

// ---------------------------------------------------------------- generators

namespace {

DyadicBlock block2(std::string x, std::string y) { return DyadicBlock({DyadicAddress(std::move(x)), DyadicAddress(std::move(y))}); }

// Leaves of the coordinate-0 all-right tree with `carets` carets.
std::vector<DyadicBlock> spine2(std::size_t carets) {
    std::vector<DyadicBlock> out;
    const auto spine = CoordTree::spine(carets);
    for (const auto& a : spine.leaves()) out.push_back(block2(a.bits(), ""));
    return out;
}

DyadicBlock mirrored(DyadicBlock b) {
    for (auto& c : b.coords) {
        std::string bits = c.bits();
        for (auto& ch : bits) ch = ch == '0' ? '1' : '0';
        c = DyadicAddress(std::move(bits));
    }
    return b;
}

Element order_preserving(std::vector<DyadicBlock> src, std::vector<DyadicBlock> tgt) {
    std::vector<BlockPair> pairs;
    for (std::size_t i = 0; i < src.size(); ++i) pairs.emplace_back(std::move(src[i]), std::move(tgt[i]));
    return Element::trusted(2, std::move(pairs));
}

Element base_generator(Family family, std::size_t i) {
    const std::string ones(i, '1');
    switch (family) {
        case Family::A:
        case Family::B: {
            auto src = spine2(i);
            src.pop_back();
            if (family == Family::A) {
                src.push_back(block2(ones + "00", ""));
                src.push_back(block2(ones + "01", ""));
            } else {
                src.push_back(block2(ones + "0", "0"));
                src.push_back(block2(ones + "0", "1"));
            }
            src.push_back(block2(ones + "1", ""));
            return order_preserving(std::move(src), spine2(i + 2));
        }
        case Family::C: {
            auto src = spine2(i);
            src.pop_back();
            src.push_back(block2(ones, "0"));
            src.push_back(block2(ones, "1"));
            return order_preserving(std::move(src), spine2(i + 1));
        }
        case Family::P:
        case Family::Q: {
            auto src = spine2(family == Family::P ? i + 1 : i + 2);
            auto tgt = src;
            std::swap(tgt[i], tgt[i + 1]);
            return order_preserving(std::move(src), std::move(tgt));
        }
    }
    throw Error(ErrorKind::UnsupportedFamily, "unknown family");
}

}  // namespace

Element generator_element(const Generator& g, const GeneratorConventions& conv) {
    Element base = base_generator(g.family, g.index);
    if (!conv.base_map_expands && (g.family == Family::A || g.family == Family::B || g.family == Family::C))
        base = invert(base);
    if (!conv.lower_child_is_smaller_half) {
        std::vector<BlockPair> pairs;
        for (const auto& [s, t] : base.pairs()) pairs.emplace_back(mirrored(s), mirrored(t));
        base = Element::trusted(2, std::move(pairs));
    }
    if (g.exponent < 0) base = invert(base);
    Element out = Element::identity(2);
    for (long k = 0; k < std::abs(g.exponent); ++k) out = compose(out, base);
    return out;
}

Element interpret(const Word& w, const GeneratorConventions& conv) {
    Element out = Element::identity(2);
    for (const auto& g : w.letters())
        if (g.exponent != 0) out = compose(out, generator_element(g, conv));
    return out;
}

Element positive_element(const ColoredTree& t) {
    if (t.max_color() > 1) throw Error(ErrorKind::DimUnsupported, "word forms are defined for dimension 2");
    return order_preserving(t.leaf_blocks(2), spine2(t.caret_count()));
}

Element permutation_element(const std::vector<std::size_t>& perm) {
    auto src = spine2(perm.size() - 1);
    std::vector<DyadicBlock> tgt;
    for (auto k : perm) tgt.push_back(src.at(k));
    return order_preserving(std::move(src), std::move(tgt));
}

// ---------------------------------------------------------------- emission

Word emit_positive(const std::vector<CoordTree>& coord_trees, bool verbose) {
    if (coord_trees.size() != 2) throw Error(ErrorKind::DimUnsupported, "word forms are defined for dimension 2");
    const auto& vertical = coord_trees[0];
    const auto& horizontal = coord_trees[1];
    // The last leaf of a coordinate tree is 1^s with s its spine caret count.
    const std::size_t vertical_spine = vertical.leaves().back().depth();
    const std::size_t horizontal_spine = horizontal.leaves().back().depth();
    const std::size_t copy_width = horizontal.leaf_count();

    Word w;
    for (std::size_t q = 0; q < horizontal_spine; ++q) w.push_back({Family::C, vertical_spine + q, 1});

    const auto a = leaf_exponents(vertical.to_colored(0), 0);
    const auto b = leaf_exponents(product_pattern(coord_trees).tree, 1);
    const bool list_a = vertical.caret_count() > 0, list_b = horizontal.caret_count() > 0;
    for (std::size_t j = 0; j < vertical.leaf_count(); ++j) {
        const std::size_t base = copy_width * j;
        if (list_a && (verbose || a[j] > 0)) w.push_back({Family::A, base, long(a[j])});
        for (std::size_t p = 0; p < copy_width; ++p)
            if (list_b && (verbose || b[base + p] > 0)) w.push_back({Family::B, base + p, long(b[base + p])});
    }
    return w;
}

Word emit_positive(const ReducedGridDiagram& rgd, bool verbose) {
    if (rgd.diagram.side != GridSide::Source)
        throw Error(ErrorKind::ContractViolation, "positive word needs a source-gridded diagram");
    return emit_positive(rgd.diagram.coord_trees, verbose);
}

Word emit_tree_word(const ColoredTree& t) {
    if (t.max_color() > 1) throw Error(ErrorKind::DimUnsupported, "word forms are defined for dimension 2");
    Nodes nodes(t);
    Word prefix;
    std::size_t depth = 0;
    for (int n = 0; nodes.color[std::size_t(n)] >= 0; n = nodes.upper[std::size_t(n)], ++depth) {
        if (nodes.color[std::size_t(n)] == 1) {
            prefix.push_back({Family::C, depth, 1});
            nodes.color[std::size_t(n)] = 0;
        }
    }

    // Every spine caret now has color 0. Strip carets bottom-up, always the
    // exposed caret whose lower leaf has the largest index.
    auto& color = nodes.color;
    std::vector<Generator> removed;
    while (color[0] >= 0) {
        std::vector<int> order;  // current leaves, left to right
        std::vector<int> stack{0};
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            if (color[std::size_t(n)] < 0) {
                order.push_back(n);
            } else {
                stack.push_back(nodes.upper[std::size_t(n)]);
                stack.push_back(nodes.lower[std::size_t(n)]);
            }
        }
        for (std::size_t i = order.size() - 1; i-- > 0;) {
            int p = nodes.parent[std::size_t(order[i])];
            if (p < 0 || nodes.lower[std::size_t(p)] != order[i] || nodes.upper[std::size_t(p)] != order[i + 1]) continue;
            const bool on_spine = i + 2 == order.size();
            if (!on_spine) removed.push_back({color[std::size_t(p)] == 0 ? Family::A : Family::B, i, 1});
            color[std::size_t(p)] = -1;
            break;
        }
    }
    std::reverse(removed.begin(), removed.end());
    prefix.append(Word(std::move(removed)));
    return prefix.reduced();
}

Word perm_word(const std::vector<std::size_t>& perm) {
    std::vector<std::size_t> arr = perm;
    const std::size_t m = arr.size();
    Word w;
    for (bool swapped = true; swapped;) {
        swapped = false;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            if (arr[i] > arr[i + 1]) {
                std::swap(arr[i], arr[i + 1]);
                w.push_back(i + 2 == m ? Generator{Family::P, i, 1} : Generator{Family::Q, i, 1});
                swapped = true;
            }
        }
    }
    return w;
}

Word NormalForm::word() const {
    Word w = positive;
    w.append(permutation);
    w.append(negative.inverse());
    return w;
}

NormalForm normal_form_parts(const Element& f, bool verbose) {
    if (f.dim() != 2) throw Error(ErrorKind::DimUnsupported, "word forms are defined for dimension 2");
    auto rgd = canon(f);
    const auto& gd = rgd.diagram;

    auto target = Pattern::trusted(2, gd.images);
    auto target_tree = canonical_tree(target);
    auto target_leaves = target_tree.leaf_blocks(2);
    std::map<DyadicBlock, std::size_t> position;
    for (std::size_t k = 0; k < target_leaves.size(); ++k) position[target_leaves[k]] = k;
    std::vector<std::size_t> perm;
    for (const auto& img : gd.images) perm.push_back(position.at(img));

    return NormalForm{emit_positive(rgd, verbose), perm_word(perm), emit_tree_word(target_tree)};
}

Word normal_form(const Element& f, bool verbose) { return normal_form_parts(f, verbose).word(); }

Word normal_form_target(const Element& f) { return normal_form(invert(f)).inverse(); }

// ---------------------------------------------------------------- rewriting

bool RuleTable::in_finite_set(const Generator& g) {
    return g.index <= 1 && (g.family == Family::A || g.family == Family::B || g.family == Family::P || g.family == Family::Q);
}

void RuleTable::add(const Generator& lhs, const Word& rhs) {
    Generator unit{lhs.family, lhs.index, 1};
    if (!equals(generator_element(unit), interpret(rhs)))
        throw Error(ErrorKind::RuleVerificationFailed, unit.str() + " := " + rhs.str() + " is not an identity");
    rules_[{lhs.family, lhs.index}] = rhs;
}

RuleTable RuleTable::defaults(std::size_t max_index) {
    RuleTable t;
    for (Family f : {Family::A, Family::B, Family::P, Family::Q})
        for (std::size_t i = 2; i <= max_index; ++i)
            t.add({f, i, 1}, Word{{Family::A, 0, -1}, {f, i - 1, 1}, {Family::A, 0, 1}});
    return t;
}

RuleTable RuleTable::parse(std::string_view body, RuleTable base) {
    for (auto line : text::content_lines(body)) {
        auto sep = line.find(":=");
        if (sep == std::string_view::npos) throw Error(ErrorKind::Parse, "expected 'LHS := RHS' in '" + std::string(line) + "'");
        auto lhs = Word::parse(line.substr(0, sep));
        if (lhs.size() != 1 || lhs.letters()[0].exponent != 1)
            throw Error(ErrorKind::Parse, "rule left side must be a single letter");
        base.add(lhs.letters()[0], Word::parse(line.substr(sep + 2)));
    }
    return base;
}

std::optional<Word> RuleTable::lookup(Family family, std::size_t index) const {
    auto it = rules_.find({family, index});
    if (it == rules_.end()) return std::nullopt;
    return it->second;
}

namespace {

void expand(const Generator& g, const RuleTable& rules, std::vector<Generator>& out, std::vector<std::string>& trace) {
    if (g.exponent == 0) return;
    if (RuleTable::in_finite_set(g)) {
        out.push_back(g);
        return;
    }
    auto rhs = rules.lookup(g.family, g.index);
    if (!rhs) throw Error(ErrorKind::NoRuleConfigured, "no rule for " + Generator{g.family, g.index, 1}.str());
    trace.push_back(Generator{g.family, g.index, 1}.str() + " := " + rhs->str());
    Word piece = g.exponent > 0 ? *rhs : rhs->inverse();
    for (long k = 0; k < std::abs(g.exponent); ++k)
        for (const auto& h : piece.letters()) expand(h, rules, out, trace);
}

}  // namespace

Rewrite rewrite_finite(const Word& w, const RuleTable& rules) {
    std::vector<Generator> out;
    std::vector<std::string> trace;
    for (const auto& g : w.letters()) expand(g, rules, out, trace);
    Word result = Word(std::move(out)).reduced();
    if (!equals(interpret(w), interpret(result)))
        throw Error(ErrorKind::RuleVerificationFailed, "rewritten word does not interpret to the input element");
    trace.push_back("verified: interpret(output) == interpret(input)");
    return Rewrite{std::move(result), std::move(trace)};
}

Word rewrite_finite(const Word& w) {
    static const RuleTable table = RuleTable::defaults();
    return rewrite_finite(w, table).word;
}

}  // namespace nvgrid
