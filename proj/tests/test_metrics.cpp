#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nvgrid/grid.hpp"
#include "nvgrid/metrics.hpp"

using namespace nvgrid;

TEST_CASE("length bounds") {
    auto id = length_bounds(Element::identity(2));
    CHECK(id.carets == 0);
    CHECK(id.lower == 0);
    CHECK(id.upper == 0);
    CHECK(length_bounds(1).upper == 0);
    auto eight = length_bounds(8);
    CHECK(eight.lower == 3);
    CHECK(eight.upper == 24);
    CHECK(length_bounds(5).upper == doctest::Approx(5 * std::log2(5.0)));
    auto f = random_element(3, 2, 7);
    CHECK(length_bounds(f).carets == caret_count(canon(f)));
}

TEST_CASE("refinement bound suite") {
    auto zero = refinement_bound_suite(1, 20, 2, 0);
    CHECK(zero.records.size() == 20);
    for (const auto& r : zero.records) CHECK(r.carets == 0);

    auto rep = refinement_bound_suite(2, 300, 2, 20);
    CHECK(rep.violations == 0);
    CHECK(rep.consistent());
    for (const auto& r : rep.records) {
        CHECK(r.within_bound);
        CHECK(r.max_coord_carets <= r.carets);
        CHECK(r.bounds.carets == r.carets);
    }
}

TEST_CASE("reports are deterministic and order independent") {
    auto a = refinement_bound_suite(99, 40, 3, 8);
    auto b = refinement_bound_suite(99, 40, 3, 8);
    CHECK(a.text() == b.text());
    CHECK(a.csv() == b.csv());
    // Trial k depends only on (seed, k).
    auto longer = refinement_bound_suite(99, 60, 3, 8);
    for (std::size_t k = 0; k < a.records.size(); ++k) CHECK(longer.records[k].carets == a.records[k].carets);
    auto tampered = a;
    tampered.violations = 7;
    CHECK_FALSE(tampered.consistent());
}

TEST_CASE("csv layout") {
    auto rep = refinement_bound_suite(5, 3, 2, 4);
    auto csv = rep.csv();
    CHECK(csv.rfind("trial,c,M,lower,upper,verdict\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 4);
    CHECK(rep.text().find("violations 0") != std::string::npos);
}

TEST_CASE("permutation counting") {
    auto one = permutation_count_experiment({CoordTree(), CoordTree()});
    CHECK(one.expected == 1);
    CHECK(one.observed == 1);
    auto two = permutation_count_experiment({CoordTree::parse("0 1"), CoordTree()});
    CHECK(two.expected == 2);
    CHECK(two.observed == 2);
    auto four = permutation_count_experiment({CoordTree::parse("0 1"), CoordTree::parse("0 1")});
    CHECK(four.expected == 24);
    CHECK(four.observed == 24);
    auto lopsided = permutation_count_experiment({CoordTree::parse("00 01 1"), CoordTree()});
    CHECK(lopsided.expected == 6);
    CHECK(lopsided.observed == 6);
    CHECK_THROWS_AS(permutation_count_experiment({CoordTree::parse("00 01 10 11"), CoordTree::parse("0 1")}), Error);
}
