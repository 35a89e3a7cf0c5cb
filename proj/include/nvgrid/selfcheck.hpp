#pragma once

// Self-consistency suite: the ten acceptance criteria as seeded, deterministic
// library routines. Shared by `nvgrid check` and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

#include "nvgrid/element.hpp"

namespace nvgrid {

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

constexpr std::uint64_t kDefaultCheckSeed = 0x5eed2024;
constexpr int kCheckCount = 10;

CheckResult run_check(int id, std::uint64_t seed = kDefaultCheckSeed);
std::vector<CheckResult> run_checks(std::uint64_t seed = kDefaultCheckSeed);
std::string format_check(const CheckResult& r);

// Classical reduced tree pair of a dimension-1 element: the coarsest dyadic
// subdivision on whose intervals the map is a single prefix replacement.
Element classical_reduced_pair(const Element& f);

}  // namespace nvgrid
