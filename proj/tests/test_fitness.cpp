#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ichea/fitness.hpp"
#include "ichea/nqueen.hpp"
#include "testutil.hpp"

using namespace ichea;

namespace {

PreferenceHistogram histogram(std::vector<std::int64_t> counts, std::int64_t total) {
    PreferenceHistogram h;
    h.counts = std::move(counts);
    h.total_constraints = total;
    return h;
}

std::strong_ordering compare_big(const BigFitness& a, const BigFitness& b) {
    if (a < b) return std::strong_ordering::less;
    if (b < a) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace

TEST_CASE("violation fitness counts satisfied constraints") {
    NQueenAdapter queens(6);

    // A full solution satisfies every constraint.
    const auto solutions = enumerate_solutions(6);
    REQUIRE(!solutions.empty());
    CHECK(violation_fitness(solutions.front(), queens) == 6);

    // All queens in one row attack each other: nothing satisfied.
    CHECK(violation_fitness({1, 1, 1, 1, 1, 1}, queens) == 0);

    // Random placements match the brute-force pairwise oracle.
    Rng rng(7);
    std::uniform_int_distribution<int> row(1, 6);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<int> rows(6);
        for (auto& r : rows) r = row(rng);
        CHECK(violation_fitness(rows, queens) == test::safe_queen_count(rows));
    }

    CHECK_THROWS_WITH(violation_fitness({1, 2, 3}, queens), "partial assignment");
}

TEST_CASE("weighted fitness reduces to violation count under unit weights") {
    NQueenAdapter queens(6);
    Rng rng(11);
    std::uniform_int_distribution<int> row(1, 6);
    std::uniform_real_distribution<double> weight(0.0, 3.0);

    for (int trial = 0; trial < 200; ++trial) {
        std::vector<int> rows(6);
        for (auto& r : rows) r = row(rng);

        CHECK(weighted_fitness(rows, std::vector<double>(6, 1.0), queens) ==
              static_cast<double>(violation_fitness(rows, queens)));
        CHECK(weighted_fitness(rows, std::vector<double>(6, 0.0), queens) == 0.0);

        std::vector<double> w(6);
        for (auto& x : w) x = weight(rng);
        // Independent dot-product recomputation.
        double expected = 0.0;
        for (int i = 0; i < 6; ++i) {
            Chromosome others;
            for (int j = 0; j < 6; ++j)
                if (j != i) others.genes.push_back({j + 1, rows[j]});
            if (queens.compatible({i + 1, rows[i]}, others)) expected += w[i];
        }
        CHECK(weighted_fitness(rows, w, queens) == expected);
    }
    CHECK_THROWS(weighted_fitness({1, 2, 3, 4, 5, 6}, {1.0, 2.0}, queens));
}

TEST_CASE("partial cost and fitness") {
    Chromosome p;
    p.genes = {{1, 1}, {2, 2}, {3, 3}};
    CHECK(partial_cost(p, 10) == 7);
    CHECK(partial_fitness(p) == 3);

    Chromosome empty;
    CHECK(partial_cost(empty, 10) == 10);
    CHECK(partial_fitness(empty) == 0);

    Chromosome full;
    for (int i = 1; i <= 10; ++i) full.genes.push_back({i, i});
    CHECK(partial_cost(full, 10) == 0);
    CHECK_THROWS(partial_cost(full, 9));
}

TEST_CASE("basic and weighted preference fitness") {
    CHECK(basic_pref_fitness(histogram({5, 3, 0, 2}, 10)) == 10);
    CHECK(basic_pref_fitness(histogram({0, 0, 0}, 10)) == 0);

    Rng rng(3);
    std::uniform_int_distribution<std::int64_t> count(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int64_t> counts(5);
        for (auto& c : counts) c = count(rng);
        const auto h = histogram(counts, 30);
        std::int64_t loop_sum = 0;
        for (auto c : counts) loop_sum += c;
        CHECK(basic_pref_fitness(h) == loop_sum);
        CHECK(weighted_pref_fitness(h, std::vector<double>(5, 1.0)) ==
              static_cast<double>(loop_sum));
        CHECK(weighted_pref_fitness(h, std::vector<double>(5, 0.0)) == 0.0);
    }
    CHECK_THROWS(weighted_pref_fitness(histogram({1, 2}, 5), {1.0, 2.0, 3.0}));
}

TEST_CASE("preference-maximizing fitness (exact)") {
    // L = 10 gives base 102.
    const auto a = histogram({5, 4, 0, 1}, 10);
    const auto b = histogram({5, 3, 0, 2}, 10);
    CHECK(pref_fitness_max(a) > pref_fitness_max(b));
    CHECK(pref_fitness_max(b) == BigFitness(5337254));
    CHECK(pref_fitness_max(histogram({0, 0, 0, 0}, 10)) == 0);
}

TEST_CASE("low-preference-minimizing fitness (exact)") {
    const auto a = histogram({3, 5, 2, 2}, 10);
    const auto b = histogram({5, 1, 3, 2}, 10);
    CHECK(pref_fitness_min(a) > pref_fitness_min(b));

    // Counts at the L^2 ceiling zero every term.
    CHECK(pref_fitness_min(histogram({100, 100, 100, 100}, 10)) == 0);

    // All-zero histogram: L^2 times the geometric series over the base.
    BigFitness geometric = 0;
    BigFitness power = 1;
    for (int p = 0; p <= 3; ++p) {
        geometric += power;
        power *= 102;
    }
    CHECK(pref_fitness_min(histogram({0, 0, 0, 0}, 10)) == BigFitness(100) * geometric);

    CHECK_THROWS_WITH(pref_fitness_min(histogram({101, 0, 0, 0}, 10)),
                      "histogram exceeds bound");
}

TEST_CASE("combined fitness: zero histogram reduces to the min form") {
    const auto zeros = histogram({0, 0, 0, 0}, 10);
    CHECK(pref_fitness_combined(zeros) == pref_fitness_min(zeros));
}

TEST_CASE("lexicographic comparator matches the reference examples") {
    CHECK(pref_compare_lex(histogram({5, 4, 0, 1}, 10), histogram({5, 3, 0, 2}, 10),
                           PrefSense::Max) == std::strong_ordering::greater);
    CHECK(pref_compare_lex(histogram({3, 5, 2, 2}, 10), histogram({5, 1, 3, 2}, 10),
                           PrefSense::Min) == std::strong_ordering::greater);
    CHECK(pref_compare_lex(histogram({5, 3, 0, 2}, 10), histogram({5, 3, 0, 2}, 10),
                           PrefSense::Max) == std::strong_ordering::equal);
    CHECK_THROWS(pref_compare_lex(histogram({1, 2}, 5), histogram({1, 2, 3}, 5), PrefSense::Max));
}

TEST_CASE("lexicographic comparator is order-equivalent to the exact fitness") {
    // Exhaustive over all histograms with L = 3, D = 2, entries in [0, 9].
    std::vector<PreferenceHistogram> all;
    for (int a = 0; a <= 9; ++a)
        for (int b = 0; b <= 9; ++b)
            for (int c = 0; c <= 9; ++c) all.push_back(histogram({a, b, c}, 3));

    for (std::size_t i = 0; i < all.size(); i += 7) {
        for (std::size_t j = 0; j < all.size(); j += 11) {
            const auto lex_max = pref_compare_lex(all[i], all[j], PrefSense::Max);
            const auto big_max = compare_big(pref_fitness_max(all[i]), pref_fitness_max(all[j]));
            CHECK(lex_max == big_max);
            const auto lex_min = pref_compare_lex(all[i], all[j], PrefSense::Min);
            const auto big_min = compare_big(pref_fitness_min(all[i]), pref_fitness_min(all[j]));
            CHECK(lex_min == big_min);
        }
    }
}

TEST_CASE("proximity cost: hand-built fixtures") {
    // Two exams, one shared student, gap 1.
    Instance inst;
    inst.exams = 2;
    inst.students = 1;
    inst.slots = 6;
    inst.enrollments = {{1, 2}};
    const auto cm = build_conflict_matrix(inst);

    Timetable tt(2, 6);
    tt.assign(1, 0);
    tt.assign(2, 1);
    const auto cost = proximity_cost(tt, cm, 1);
    CHECK(cost.numerator == 16);
    CHECK(cost.value() == 16.0);

    // Gap beyond the window contributes nothing.
    Timetable spread(2, 7);
    spread.assign(1, 0);
    spread.assign(2, 6);
    CHECK(proximity_cost(spread, cm, 1).numerator == 0);

    // Same-slot conflict is a hard violation.
    Timetable clash(2, 6);
    clash.assign(1, 2);
    clash.assign(2, 2);
    CHECK_THROWS_WITH(proximity_cost(clash, cm, 1), "hard violation");
}

TEST_CASE("proximity cost equals the per-student double-loop oracle") {
    Rng rng(19);
    for (int trial = 0; trial < 100; ++trial) {
        auto fixture = test::random_instance(10, 20, 8, rng);
        const auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);
        const auto cost = proximity_cost(tt, fixture.cm, fixture.inst.students);
        CHECK(cost.numerator == test::per_student_proximity_numerator(fixture.inst, tt));
        CHECK(cost.students == fixture.inst.students);
    }
}

TEST_CASE("proximity cost is invariant under slot-order reversal") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        auto fixture = test::random_instance(12, 25, 9, rng);
        const auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);
        Timetable reversed(fixture.inst.exams, fixture.inst.slots);
        for (int e = 1; e <= fixture.inst.exams; ++e)
            reversed.assign(e, fixture.inst.slots - 1 - tt.slot_of(e));
        CHECK(proximity_cost(tt, fixture.cm, fixture.inst.students).numerator ==
              proximity_cost(reversed, fixture.cm, fixture.inst.students).numerator);
    }
}

TEST_CASE("preference histogram of a timetable") {
    // Three pairwise-conflicting exams in slots 0, 1, 2.
    Instance inst;
    inst.exams = 3;
    inst.students = 1;
    inst.slots = 5;
    inst.enrollments = {{1, 2, 3}};
    const auto cm = build_conflict_matrix(inst);

    Timetable tt(3, 5);
    tt.assign(1, 0);
    tt.assign(2, 1);
    tt.assign(3, 2);
    const auto h = preference_histogram(tt, cm);
    CHECK(h.counts == std::vector<std::int64_t>{2, 1, 0, 0, 0});
    CHECK(h.total_constraints == 3);

    // No pair within the window.
    Timetable spread(3, 20);
    spread.assign(1, 0);
    spread.assign(2, 7);
    spread.assign(3, 14);
    CHECK(preference_histogram(spread, cm).counts == std::vector<std::int64_t>{0, 0, 0, 0, 0});
}

TEST_CASE("preference histogram matches a pair-enumeration oracle") {
    Rng rng(29);
    for (int trial = 0; trial < 50; ++trial) {
        auto fixture = test::random_instance(10, 15, 8, rng);
        const auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);
        const auto h = preference_histogram(tt, fixture.cm);

        std::vector<std::int64_t> expected(5, 0);
        for (int a = 1; a <= 10; ++a)
            for (int b = a + 1; b <= 10; ++b) {
                if (!fixture.cm.conflicting(a, b)) continue;
                const int gap = std::abs(tt.slot_of(a) - tt.slot_of(b));
                if (gap >= 1 && gap <= 5) ++expected[gap - 1];
            }
        CHECK(h.counts == expected);
    }
}

TEST_CASE("gap-histogram weights reproduce the proximity numerator on unit conflicts") {
    // Each student takes exactly two exams and every pair is distinct, so
    // every conflicting pair carries weight one.
    Instance inst;
    inst.exams = 6;
    inst.slots = 6;
    inst.enrollments = {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {1, 6}};
    inst.students = static_cast<int>(inst.enrollments.size());
    const auto cm = build_conflict_matrix(inst);

    Rng rng(31);
    const auto tt = test::random_feasible_timetable(inst, cm, rng);
    const auto h = preference_histogram(tt, cm);
    const double weighted = weighted_pref_fitness(h, {16, 8, 4, 2, 1});
    CHECK(weighted == static_cast<double>(proximity_cost(tt, cm, inst.students).numerator));
}

TEST_CASE("spread cost key orders by worst gap first") {
    Rng rng(37);
    auto fixture = test::random_instance(10, 20, 8, rng);
    const auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);
    const auto key = spread_cost_key(tt, fixture.cm);
    const auto h = preference_histogram(tt, fixture.cm);
    REQUIRE(key.parts.size() == 5);
    for (int d = 0; d < 5; ++d) CHECK(key.parts[d] == h.counts[d]);

    const auto wkey = weighted_cost_key(tt, fixture.cm);
    CHECK(wkey.parts.size() == 1);
    CHECK(wkey.parts[0] == proximity_cost(tt, fixture.cm, fixture.inst.students).numerator);
}
