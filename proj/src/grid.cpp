#include "nvgrid/grid.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace nvgrid {

namespace {

std::vector<std::size_t> strides(const std::vector<CoordTree>& trees) {
    std::vector<std::size_t> s(trees.size(), 1);
    for (std::size_t d = trees.size(); d-- > 1;) s[d - 1] = s[d] * trees[d].leaf_count();
    return s;
}

// Halving closure of the coordinate intervals used by `blocks`: an interval
// is split iff some used interval lies strictly inside it.
CoordTree closure_tree(const std::vector<BlockPair>& pairs, std::size_t d) {
    std::set<std::string> internal;
    for (const auto& p : pairs) {
        const auto& bits = p.first[d].bits();
        for (std::size_t k = 0; k < bits.size(); ++k) internal.insert(bits.substr(0, k));
    }
    if (internal.empty()) return CoordTree();
    std::vector<DyadicAddress> leaves;
    for (const auto& node : internal)
        for (char b : {'0', '1'})
            if (!internal.count(node + b)) leaves.emplace_back(node + b);
    return CoordTree(std::move(leaves));
}

bool siblings(const DyadicAddress& a, const DyadicAddress& b) {
    return a.depth() == b.depth() && a.depth() > 0 && a.last_bit() == 0 && b.last_bit() == 1 &&
           a.bits().compare(0, a.depth() - 1, b.bits(), 0, b.depth() - 1) == 0;
}

}  // namespace

std::vector<std::size_t> GridDiagram::leaf_counts() const {
    std::vector<std::size_t> out;
    for (const auto& t : coord_trees) out.push_back(t.leaf_count());
    return out;
}

Element GridDiagram::element() const {
    std::vector<BlockPair> pairs;
    pairs.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (side == GridSide::Source)
            pairs.emplace_back(cells[i], images[i]);
        else
            pairs.emplace_back(images[i], cells[i]);
    }
    return Element::trusted(dim, std::move(pairs));
}

ColoredTree GridDiagram::composite_tree() const { return product_pattern(coord_trees).tree; }

GridDiagram gridify(const Element& f, GridSide side) {
    if (side == GridSide::Target) {
        auto gd = gridify(invert(f), GridSide::Source);
        gd.side = GridSide::Target;
        return gd;
    }
    GridDiagram gd;
    gd.dim = f.dim();
    gd.side = GridSide::Source;
    for (std::size_t d = 0; d < gd.dim; ++d) gd.coord_trees.push_back(closure_tree(f.pairs(), d));
    gd.cells = product_pattern(gd.coord_trees).pattern.blocks();
    gd.images.assign(gd.cells.size(), DyadicBlock());

    const auto stride = strides(gd.coord_trees);
    for (const auto& [s, t] : f.pairs()) {
        // The grid cells inside s form a sub-box of the index grid.
        std::vector<std::pair<std::size_t, std::size_t>> range;
        for (std::size_t d = 0; d < gd.dim; ++d) range.push_back(gd.coord_trees[d].leaves_under(s[d]));
        std::vector<std::size_t> at(gd.dim);
        for (std::size_t d = 0; d < gd.dim; ++d) at[d] = range[d].first;
        while (true) {
            std::size_t idx = 0;
            for (std::size_t d = 0; d < gd.dim; ++d) idx += at[d] * stride[d];
            gd.images[idx] = transport(gd.cells[idx], s, t);
            std::size_t d = gd.dim;
            while (d-- > 0) {
                if (++at[d] < range[d].second) break;
                at[d] = range[d].first;
            }
            if (d == std::size_t(-1)) break;
        }
    }
    return gd;
}

std::vector<ExposedCaret> exposed_carets(const GridDiagram& gd) {
    std::vector<ExposedCaret> out;
    for (std::size_t d = 0; d < gd.dim; ++d) {
        const auto& leaves = gd.coord_trees[d].leaves();
        for (std::size_t k = 0; k + 1 < leaves.size(); ++k)
            if (siblings(leaves[k], leaves[k + 1])) out.push_back({d, k});
    }
    return out;
}

bool reducible_caret(const GridDiagram& gd, ExposedCaret caret) {
    const auto d = caret.coord;
    const auto stride = strides(gd.coord_trees);
    const auto block = stride[d] * gd.coord_trees[d].leaf_count();
    for (std::size_t outer = 0; outer < gd.cells.size(); outer += block) {
        for (std::size_t inner = 0; inner < stride[d]; ++inner) {
            const auto i0 = outer + caret.leaf * stride[d] + inner;
            const auto& lo = gd.images[i0];
            const auto& hi = gd.images[i0 + stride[d]];
            for (std::size_t e = 0; e < gd.dim; ++e)
                if (e != d && lo[e] != hi[e]) return false;
            if (!siblings(lo[d], hi[d])) return false;
        }
    }
    return true;
}

std::vector<ExposedCaret> reducible_carets(const GridDiagram& gd) {
    std::vector<ExposedCaret> out;
    for (auto c : exposed_carets(gd))
        if (reducible_caret(gd, c)) out.push_back(c);
    return out;
}

GridDiagram merge_caret(const GridDiagram& gd, ExposedCaret caret) {
    const auto d = caret.coord;
    const auto stride = strides(gd.coord_trees);
    const auto count = gd.coord_trees[d].leaf_count();

    GridDiagram out;
    out.dim = gd.dim;
    out.side = gd.side;
    out.coord_trees = gd.coord_trees;
    auto leaves = gd.coord_trees[d].leaves();
    leaves[caret.leaf] = leaves[caret.leaf].parent();
    leaves.erase(leaves.begin() + long(caret.leaf) + 1);
    out.coord_trees[d] = CoordTree(std::move(leaves));

    out.cells.reserve(gd.cells.size() - gd.cells.size() / count);
    out.images.reserve(out.cells.capacity());
    for (std::size_t idx = 0; idx < gd.cells.size(); ++idx) {
        const auto pos = (idx / stride[d]) % count;
        if (pos == caret.leaf + 1) continue;
        if (pos == caret.leaf) {
            DyadicBlock c = gd.cells[idx], im = gd.images[idx];
            c[d] = c[d].parent();
            im[d] = im[d].parent();
            out.cells.push_back(std::move(c));
            out.images.push_back(std::move(im));
        } else {
            out.cells.push_back(gd.cells[idx]);
            out.images.push_back(gd.images[idx]);
        }
    }
    return out;
}

ReducedGridDiagram reduce(GridDiagram gd) {
    std::size_t idle = 0;
    for (std::size_t d = 0; idle < gd.dim; d = (d + 1) % gd.dim) {
        const auto& leaves = gd.coord_trees[d].leaves();
        std::optional<ExposedCaret> best;
        for (std::size_t k = 0; k + 1 < leaves.size(); ++k) {
            if (!siblings(leaves[k], leaves[k + 1])) continue;
            if (best && leaves[k].depth() <= leaves[best->leaf].depth()) continue;
            if (reducible_caret(gd, {d, k})) best = ExposedCaret{d, k};
        }
        if (best) {
            gd = merge_caret(gd, *best);
            idle = 0;
        } else {
            ++idle;
        }
    }
    const auto m = gd.caret_count();
    return ReducedGridDiagram{std::move(gd), m};
}

ReducedGridDiagram reduce(GridDiagram gd, Rng& rng) {
    while (true) {
        auto options = reducible_carets(gd);
        if (options.empty()) break;
        gd = merge_caret(gd, options[uniform_below(rng, options.size())]);
    }
    const auto m = gd.caret_count();
    return ReducedGridDiagram{std::move(gd), m};
}

ReducedGridDiagram canon(const Element& f) { return reduce(gridify(f, GridSide::Source)); }

std::size_t caret_count(const ReducedGridDiagram& rgd) { return rgd.caret_count; }

namespace {

std::string header(const GridDiagram& gd) {
    std::string out = "leaves";
    for (auto n : gd.leaf_counts()) out += " " + std::to_string(n);
    out += " M " + std::to_string(gd.caret_count());
    return out;
}

}  // namespace

std::string format_grid(const GridDiagram& gd) {
    return std::string("# grid ") + (gd.side == GridSide::Source ? "source " : "target ") + header(gd) + "\n" +
           format_element(gd.element());
}

std::string format_canon(const ReducedGridDiagram& rgd) {
    return "# " + header(rgd.diagram) + "\n" + format_element(rgd.diagram.element());
}

}  // namespace nvgrid
