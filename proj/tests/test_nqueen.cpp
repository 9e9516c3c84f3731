#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ichea/nqueen.hpp"
#include "testutil.hpp"

using namespace ichea;

TEST_CASE("queen compatibility: the 6-queen worked positions") {
    const Chromosome base = NQueenAdapter::from_rows({3, 6});
    CHECK_FALSE(queen_compatible(3, 6, base)); // row clash with column 2
    CHECK_FALSE(queen_compatible(3, 5, base)); // diagonal clash with column 2
    CHECK(queen_compatible(3, 2, base));
    CHECK_THROWS_WITH(queen_compatible(2, 1, base), "duplicate column");
}

TEST_CASE("queen compatibility agrees with the naive all-pairs check") {
    Rng rng(41);
    std::uniform_int_distribution<int> n_dist(4, 9);
    for (int trial = 0; trial < 100000; ++trial) {
        const int n = n_dist(rng);
        NQueenAdapter queens(n);
        std::vector<ConstraintId> all(n);
        std::iota(all.begin(), all.end(), 1);
        const Chromosome c = queens.random_chromosome(all, rng);
        const int column = c.length() + 1;
        if (column > n) continue;
        std::uniform_int_distribution<int> row_dist(1, n);
        const int row = row_dist(rng);

        bool naive_ok = true;
        for (const auto& g : c.genes) {
            if (g.value == row || std::abs(g.constraint - column) == std::abs(g.value - row)) {
                naive_ok = false;
                break;
            }
        }
        CHECK(queen_compatible(column, row, c) == naive_ok);
    }
}

TEST_CASE("solution enumeration oracle") {
    CHECK(enumerate_solutions(1).size() == 1);
    CHECK(enumerate_solutions(2).empty());
    CHECK(enumerate_solutions(3).empty());
    CHECK(enumerate_solutions(4).size() == 2);
    CHECK(enumerate_solutions(8).size() == 92);
    CHECK_THROWS_WITH(enumerate_solutions(11), "oracle scale exceeded");

    // Every enumerated placement really is pairwise safe.
    for (const auto& rows : enumerate_solutions(6))
        CHECK(test::safe_queen_count(rows) == 6);
}

TEST_CASE("fusion operation bound: parents of length one") {
    NQueenAdapter queens(10);
    const Chromosome a = NQueenAdapter::from_rows({1});
    const Chromosome b = NQueenAdapter::from_rows({5});
    const auto count = count_fusion_ops(a, b, queens);
    CHECK(count.bound == 3 * 10 + 2); // (1 + 1 + N) + N(1 + 1)
    CHECK(count.measured <= count.bound);
}

TEST_CASE("fusion operation bound: half-length all-non-duplicate parents") {
    // Rows 1..N/2 against rows N/2+1..N, N = 10: the worst-case bound
    // N^2 + 2N.
    NQueenAdapter queens(10);
    std::vector<int> low, high;
    Chromosome a, b;
    // Use a known solution split so both halves are feasible placements:
    // columns 1..5 with rows from disjoint value ranges.
    a = NQueenAdapter::from_rows({1, 3, 5, 2, 4});
    b = NQueenAdapter::from_rows({6, 8, 10, 7, 9});
    const auto count = count_fusion_ops(a, b, queens);
    CHECK(count.bound == 10 * 10 + 2 * 10);
    CHECK(count.measured <= count.bound);
}

TEST_CASE("prefix chromosome construction") {
    NQueenAdapter queens(8);
    Rng rng(43);
    std::vector<ConstraintId> all(8);
    std::iota(all.begin(), all.end(), 1);
    for (int trial = 0; trial < 200; ++trial) {
        const Chromosome c = queens.random_chromosome(all, rng);
        // Genes cover columns 1..k in order.
        for (int k = 0; k < c.length(); ++k) CHECK(c.genes[k].constraint == k + 1);
        CHECK(is_feasible_partial(c, queens));
    }
}

TEST_CASE("proposed extension targets the next free column") {
    NQueenAdapter queens(8);
    Rng rng(47);
    std::vector<ConstraintId> all(8);
    std::iota(all.begin(), all.end(), 1);
    const Chromosome c = NQueenAdapter::from_rows({1, 3});
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = queens.propose_extension(c, all, rng);
        REQUIRE(g.has_value());
        CHECK(g->constraint == 3);
    }
}
