#pragma once

// Grid diagrams: representatives whose gridded side is a product of one
// single-colored tree per coordinate, and their reduction to the unique
// reduced grid diagram used as the canonical form of an element.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "nvgrid/dyadic.hpp"
#include "nvgrid/element.hpp"
#include "nvgrid/random.hpp"

namespace nvgrid {

enum class GridSide { Source, Target };

struct GridDiagram {
    std::size_t dim = 0;
    GridSide side = GridSide::Source;
    std::vector<CoordTree> coord_trees;
    // Cells of the gridded side in composite-tree leaf order (coordinate 0
    // outermost), which is also lexicographic order.
    std::vector<DyadicBlock> cells;
    // Block on the other side matched with each cell.
    std::vector<DyadicBlock> images;

    std::size_t caret_count() const noexcept { return cells.size() - 1; }
    std::vector<std::size_t> leaf_counts() const;
    Element element() const;
    ColoredTree composite_tree() const;

    friend bool operator==(const GridDiagram&, const GridDiagram&) = default;
};

struct ReducedGridDiagram {
    GridDiagram diagram;
    std::size_t caret_count = 0;

    friend bool operator==(const ReducedGridDiagram&, const ReducedGridDiagram&) = default;
};

// An exposed caret of coordinate tree `coord`: its leaves sit at positions
// (leaf, leaf + 1).
struct ExposedCaret {
    std::size_t coord = 0;
    std::size_t leaf = 0;

    friend bool operator==(const ExposedCaret&, const ExposedCaret&) = default;
};

GridDiagram gridify(const Element& f, GridSide side = GridSide::Source);

std::vector<ExposedCaret> exposed_carets(const GridDiagram& gd);
bool reducible_caret(const GridDiagram& gd, ExposedCaret caret);
std::vector<ExposedCaret> reducible_carets(const GridDiagram& gd);
GridDiagram merge_caret(const GridDiagram& gd, ExposedCaret caret);

// Round-robin over coordinates, deepest reducible caret first.
ReducedGridDiagram reduce(GridDiagram gd);
// Uniformly random choice among the reducible carets at every step.
ReducedGridDiagram reduce(GridDiagram gd, Rng& rng);

ReducedGridDiagram canon(const Element& f);
std::size_t caret_count(const ReducedGridDiagram& rgd);

// Header comment with side, per-coordinate leaf counts and M, then the
// element file of the diagram's representative.
std::string format_grid(const GridDiagram& gd);
std::string format_canon(const ReducedGridDiagram& rgd);

}  // namespace nvgrid
