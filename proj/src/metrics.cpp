#include "nvgrid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>

#include "nvgrid/grid.hpp"

namespace nvgrid {

LengthBounds length_bounds(std::size_t carets) {
    LengthBounds b;
    b.carets = carets;
    if (carets > 1) {
        b.lower = std::log2(double(carets));
        b.upper = double(carets) * b.lower;
    }
    return b;
}

LengthBounds length_bounds(const Element& f) { return length_bounds(canon(f).caret_count); }

namespace {

double ipow(std::size_t base, std::size_t exp) {
    double r = 1;
    for (std::size_t i = 0; i < exp; ++i) r *= double(base);
    return r;
}

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

ExperimentReport refinement_bound_suite(std::uint64_t seed, std::size_t trials, std::size_t dim, std::size_t caret_budget) {
    ExperimentReport r;
    r.seed = seed;
    r.trials = trials;
    r.dim = dim;
    r.budget = caret_budget;
    for (std::size_t t = 0; t < trials; ++t) {
        auto f = random_element(derive_seed(seed, t), dim, caret_budget);
        auto rgd = canon(f);
        TrialRecord rec;
        rec.trial = t;
        rec.input_carets = f.size() - 1;
        rec.carets = rgd.caret_count;
        for (const auto& tree : rgd.diagram.coord_trees)
            rec.max_coord_carets = std::max(rec.max_coord_carets, tree.caret_count());
        rec.bounds = length_bounds(rec.carets);
        rec.within_bound = double(rec.carets + 1) <= ipow(rec.input_carets + 1, dim);
        r.records.push_back(rec);
    }
    for (const auto& rec : r.records) {
        r.violations += rec.within_bound ? 0 : 1;
        r.max_ratio = std::max(r.max_ratio, double(rec.carets + 1) / ipow(rec.input_carets + 1, dim));
    }
    return r;
}

bool ExperimentReport::consistent() const {
    std::size_t v = 0;
    double mr = 0;
    for (const auto& rec : records) {
        bool ok = double(rec.carets + 1) <= ipow(rec.input_carets + 1, dim);
        if (ok != rec.within_bound) return false;
        v += ok ? 0 : 1;
        mr = std::max(mr, double(rec.carets + 1) / ipow(rec.input_carets + 1, dim));
    }
    return records.size() == trials && v == violations && mr == max_ratio;
}

std::string ExperimentReport::text() const {
    std::string out = "refinement-bound seed " + std::to_string(seed) + " trials " + std::to_string(trials) + " dim " +
                      std::to_string(dim) + " budget " + std::to_string(budget) + "\n";
    for (const auto& rec : records) {
        out += "trial " + std::to_string(rec.trial) + " c " + std::to_string(rec.input_carets) + " M " +
               std::to_string(rec.carets) + " m " + std::to_string(rec.max_coord_carets) + " lower " +
               fixed(rec.bounds.lower) + " upper " + fixed(rec.bounds.upper) + " " +
               (rec.within_bound ? "ok" : "VIOLATION") + "\n";
    }
    out += "violations " + std::to_string(violations) + " max_ratio " + fixed(max_ratio) + "\n";
    return out;
}

std::string ExperimentReport::csv() const {
    std::string out = "trial,c,M,lower,upper,verdict\n";
    for (const auto& rec : records) {
        out += std::to_string(rec.trial) + "," + std::to_string(rec.input_carets) + "," + std::to_string(rec.carets) + "," +
               fixed(rec.bounds.lower) + "," + fixed(rec.bounds.upper) + "," + (rec.within_bound ? "ok" : "violation") +
               "\n";
    }
    return out;
}

PermutationCount permutation_count_experiment(const std::vector<CoordTree>& grid, std::size_t cap) {
    auto pattern = product_pattern(grid).pattern;
    if (pattern.size() > cap)
        throw Error(ErrorKind::CapExceeded,
                    std::to_string(pattern.size()) + " cells exceeds the cap of " + std::to_string(cap));
    std::vector<std::size_t> perm(pattern.size());
    std::iota(perm.begin(), perm.end(), 0);
    PermutationCount out;
    std::set<std::string> seen;
    do {
        ++out.expected;
        seen.insert(format_canon(canon(element_from_matching(pattern, pattern, perm))));
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.observed = seen.size();
    return out;
}

}  // namespace nvgrid
