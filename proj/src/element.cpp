#include "nvgrid/element.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "text.hpp"

namespace nvgrid {

namespace {

// Blocks of one side of an element in pattern order, with the pair each came from.
struct Side {
    Pattern pattern;
    std::vector<std::size_t> pair_of;
};

Side target_side(const Element& f) {
    std::vector<std::size_t> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    const auto& pairs = f.pairs();
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pairs[a].second < pairs[b].second; });
    std::vector<DyadicBlock> blocks;
    blocks.reserve(order.size());
    for (auto i : order) blocks.push_back(pairs[i].second);
    return Side{Pattern::trusted(f.dim(), std::move(blocks)), std::move(order)};
}

void require_same_dim(const Element& f, const Element& g) {
    if (f.dim() != g.dim())
        throw Error(ErrorKind::DimMismatch,
                    "elements of dimension " + std::to_string(f.dim()) + " and " + std::to_string(g.dim()));
}

}  // namespace

Element Element::identity(std::size_t dim) {
    return trusted(dim, {{DyadicBlock::whole(dim), DyadicBlock::whole(dim)}});
}

Element Element::trusted(std::size_t dim, std::vector<BlockPair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    Element e;
    e.dim_ = dim;
    e.pairs_ = std::move(pairs);
    return e;
}

Pattern Element::source_pattern() const {
    std::vector<DyadicBlock> blocks;
    blocks.reserve(pairs_.size());
    for (const auto& p : pairs_) blocks.push_back(p.first);
    return Pattern::trusted(dim_, std::move(blocks));
}

Pattern Element::target_pattern() const { return target_side(*this).pattern; }

Element element_new(std::vector<BlockPair> pairs) {
    if (pairs.empty()) throw Error(ErrorKind::Gap, "element with no blocks");
    const std::size_t dim = pairs.front().first.dim();
    std::vector<DyadicBlock> src, tgt;
    for (const auto& [s, t] : pairs) {
        src.push_back(s);
        tgt.push_back(t);
    }
    pattern_validate(dim, std::move(src));
    pattern_validate(dim, std::move(tgt));
    return Element::trusted(dim, std::move(pairs));
}

Element element_from_matching(const Pattern& source, const Pattern& target, const std::vector<std::size_t>& match) {
    if (source.dim() != target.dim()) throw Error(ErrorKind::DimMismatch, "source and target dimensions differ");
    if (source.size() != target.size() || match.size() != source.size())
        throw Error(ErrorKind::CountMismatch, "source and target have different block counts");
    std::vector<bool> used(match.size(), false);
    std::vector<BlockPair> pairs;
    for (std::size_t i = 0; i < match.size(); ++i) {
        if (match[i] >= match.size() || used[match[i]]) throw Error(ErrorKind::CountMismatch, "matching is not a bijection");
        used[match[i]] = true;
        pairs.emplace_back(source[i], target[match[i]]);
    }
    return Element::trusted(source.dim(), std::move(pairs));
}

DyadicBlock transport(const DyadicBlock& cell, const DyadicBlock& from, const DyadicBlock& to) {
    DyadicBlock out = to;
    for (std::size_t d = 0; d < cell.dim(); ++d)
        out[d] = DyadicAddress(to[d].bits() + cell[d].bits().substr(from[d].depth()));
    return out;
}

Element compose(const Element& f, const Element& g) {
    require_same_dim(f, g);
    auto ft = target_side(f);
    auto r = common_refinement(ft.pattern, g.source_pattern());
    std::vector<BlockPair> pairs;
    pairs.reserve(r.pattern.size());
    for (std::size_t k = 0; k < r.pattern.size(); ++k) {
        const auto& cell = r.pattern[k];
        const auto& fp = f.pairs()[ft.pair_of[r.origin[k].first]];
        const auto& gp = g.pairs()[r.origin[k].second];
        pairs.emplace_back(transport(cell, fp.second, fp.first), transport(cell, gp.first, gp.second));
    }
    return Element::trusted(f.dim(), std::move(pairs));
}

Element invert(const Element& f) {
    std::vector<BlockPair> pairs;
    pairs.reserve(f.size());
    for (const auto& [s, t] : f.pairs()) pairs.emplace_back(t, s);
    return Element::trusted(f.dim(), std::move(pairs));
}

Point evaluate(const Element& f, const Point& x) {
    if (x.size() != f.dim())
        throw Error(ErrorKind::DimMismatch, "point has " + std::to_string(x.size()) + " coordinates");
    for (const auto& [s, t] : f.pairs()) {
        bool inside = true;
        for (std::size_t d = 0; d < f.dim() && inside; ++d) {
            const auto& a = s[d].bits();
            const auto& b = x[d].bits();
            for (std::size_t i = 0; i < a.size() && inside; ++i) inside = a[i] == (i < b.size() ? b[i] : '0');
        }
        if (!inside) continue;
        Point y;
        for (std::size_t d = 0; d < f.dim(); ++d) {
            const auto& b = x[d].bits();
            std::string tail = b.size() > s[d].depth() ? b.substr(s[d].depth()) : std::string();
            y.emplace_back(t[d].bits() + tail);
        }
        return y;
    }
    throw Error(ErrorKind::ContractViolation, "point not covered by any source block");
}

bool equals(const Element& f, const Element& g) {
    require_same_dim(f, g);
    auto r = common_refinement(f.source_pattern(), g.source_pattern());
    for (std::size_t k = 0; k < r.pattern.size(); ++k) {
        const auto& fp = f.pairs()[r.origin[k].first];
        const auto& gp = g.pairs()[r.origin[k].second];
        if (transport(r.pattern[k], fp.first, fp.second) != transport(r.pattern[k], gp.first, gp.second)) return false;
    }
    return true;
}

Element refine_cell(const Element& f, std::size_t index, std::size_t coord) {
    auto pairs = f.pairs();
    auto [s, t] = pairs.at(index);
    pairs[index] = {s.child(coord, 0), t.child(coord, 0)};
    pairs.emplace_back(s.child(coord, 1), t.child(coord, 1));
    return Element::trusted(f.dim(), std::move(pairs));
}

Element random_refinement(const Element& f, Rng& rng, std::size_t splits) {
    Element out = f;
    for (std::size_t i = 0; i < splits; ++i)
        out = refine_cell(out, uniform_below(rng, out.size()), uniform_below(rng, out.dim()));
    return out;
}

std::vector<DyadicBlock> random_tree_blocks(Rng& rng, std::size_t dim, std::size_t carets) {
    std::vector<DyadicBlock> leaves{DyadicBlock::whole(dim)};
    for (std::size_t i = 0; i < carets; ++i) {
        auto k = uniform_below(rng, leaves.size());
        auto d = uniform_below(rng, dim);
        DyadicBlock b = leaves[k];
        leaves[k] = b.child(d, 0);
        leaves.push_back(b.child(d, 1));
    }
    return leaves;
}

Element random_element(Rng& rng, std::size_t dim, std::size_t caret_budget) {
    auto src = random_tree_blocks(rng, dim, caret_budget);
    auto tgt = random_tree_blocks(rng, dim, caret_budget);
    // Fisher-Yates over the target blocks.
    for (std::size_t i = tgt.size(); i > 1; --i) std::swap(tgt[i - 1], tgt[uniform_below(rng, i)]);
    std::vector<BlockPair> pairs;
    for (std::size_t i = 0; i < src.size(); ++i) pairs.emplace_back(std::move(src[i]), std::move(tgt[i]));
    return Element::trusted(dim, std::move(pairs));
}

Element random_element(std::uint64_t seed, std::size_t dim, std::size_t caret_budget) {
    Rng rng(seed);
    return random_element(rng, dim, caret_budget);
}

std::string format_element(const Element& f) {
    std::string out = "dim " + std::to_string(f.dim()) + "\n";
    for (const auto& [s, t] : f.pairs()) out += s.str() + " -> " + t.str() + "\n";
    return out;
}

Element parse_element(std::string_view body) {
    auto lines = text::content_lines(body);
    if (lines.empty()) throw Error(ErrorKind::Parse, "empty element file");
    auto head = text::tokens(lines.front());
    std::size_t dim = 0;
    if (head.size() != 2 || head[0] != "dim" ||
        std::from_chars(head[1].data(), head[1].data() + head[1].size(), dim).ptr != head[1].data() + head[1].size() ||
        dim == 0)
        throw Error(ErrorKind::Parse, "expected 'dim <n>' header");
    std::vector<BlockPair> pairs;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto arrow = lines[i].find("->");
        if (arrow == std::string_view::npos) throw Error(ErrorKind::Parse, "expected '<src> -> <tgt>' on line '" + std::string(lines[i]) + "'");
        auto s = DyadicBlock::parse(lines[i].substr(0, arrow));
        auto t = DyadicBlock::parse(lines[i].substr(arrow + 2));
        if (s.dim() != dim || t.dim() != dim) throw Error(ErrorKind::DimMismatch, "block dimension differs from header");
        pairs.emplace_back(std::move(s), std::move(t));
    }
    return element_new(std::move(pairs));
}

Point parse_point(std::string_view body) {
    Point x;
    for (auto part : text::split(text::trim(body), ',')) x.push_back(BinaryFraction::parse(part));
    return x;
}

std::string format_point(const Point& x) {
    std::string out;
    for (std::size_t d = 0; d < x.size(); ++d) {
        if (d) out += ',';
        out += x[d].str();
    }
    return out;
}

}  // namespace nvgrid
