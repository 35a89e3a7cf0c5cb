#pragma once

// Word-length bracketing by the caret count M of the reduced grid diagram,
// and the seeded experiments around it.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nvgrid/dyadic.hpp"
#include "nvgrid/element.hpp"

namespace nvgrid {

// log2(M) and M*log2(M), both 0 for M <= 1. These bracket the word length
// only up to the unknown multiplicative and additive constants of a
// quasi-isometry; the constants are not estimated.
struct LengthBounds {
    std::size_t carets = 0;
    double lower = 0;
    double upper = 0;
};

LengthBounds length_bounds(std::size_t carets);
LengthBounds length_bounds(const Element& f);

struct TrialRecord {
    std::size_t trial = 0;
    std::size_t input_carets = 0;  // c, carets of the generating diagram
    std::size_t carets = 0;        // M
    std::size_t max_coord_carets = 0;  // m(x), largest coordinate tree
    LengthBounds bounds;
    bool within_bound = true;  // M + 1 <= (c + 1)^dim
};

struct ExperimentReport {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t dim = 0;
    std::size_t budget = 0;
    std::vector<TrialRecord> records;
    std::size_t violations = 0;
    double max_ratio = 0;  // max of (M + 1) / (c + 1)^dim

    // Recomputes the aggregates from the records.
    bool consistent() const;
    std::string text() const;
    std::string csv() const;
};

ExperimentReport refinement_bound_suite(std::uint64_t seed, std::size_t trials, std::size_t dim, std::size_t caret_budget);

struct PermutationCount {
    std::uint64_t expected = 0;  // cells!
    std::uint64_t observed = 0;  // distinct reduced grid diagrams
};

PermutationCount permutation_count_experiment(const std::vector<CoordTree>& grid, std::size_t cap = 7);

}  // namespace nvgrid
