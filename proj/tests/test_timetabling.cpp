#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ichea/timetabling.hpp"
#include "testutil.hpp"

using namespace ichea;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ichea_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

} // namespace

TEST_CASE("instance parsing: hand-built two-student fixture") {
    TempDir dir;
    write_file(dir.path / "tiny.crs", "0001 2\n0002 1\n");
    write_file(dir.path / "tiny.stu", "1\n1 2\n");

    const auto inst = parse_instance(dir.path / "tiny.crs", dir.path / "tiny.stu", 4);
    CHECK(inst.exams == 2);
    CHECK(inst.students == 2);
    CHECK(inst.slots == 4);
    CHECK(inst.enrollments[0] == std::vector<int>{1});
    CHECK(inst.enrollments[1] == std::vector<int>{1, 2});
}

TEST_CASE("instance parsing: error paths") {
    TempDir dir;
    write_file(dir.path / "a.crs", "0001 2\n");
    write_file(dir.path / "empty.stu", "");
    CHECK_THROWS(parse_instance(dir.path / "a.crs", dir.path / "empty.stu", 4)); // no students

    write_file(dir.path / "bad.stu", "1 99\n");
    CHECK_THROWS(parse_instance(dir.path / "a.crs", dir.path / "bad.stu", 4)); // id out of range

    write_file(dir.path / "bad.crs", "one two\n");
    write_file(dir.path / "ok.stu", "1\n");
    CHECK_THROWS(parse_instance(dir.path / "bad.crs", dir.path / "ok.stu", 4));

    CHECK_THROWS(parse_instance(dir.path / "a.crs", dir.path / "ok.stu", 0)); // bad slot count
}

TEST_CASE("instance parsing warns on enrollment mismatch") {
    TempDir dir;
    write_file(dir.path / "m.crs", "0001 5\n"); // declared 5, actual 1
    write_file(dir.path / "m.stu", "1\n");
    std::ostringstream warnings;
    const auto inst = parse_instance(dir.path / "m.crs", dir.path / "m.stu", 3, &warnings);
    CHECK(inst.exams == 1);
    CHECK(warnings.str().find("mismatch") != std::string::npos);
}

TEST_CASE("conflict matrix construction") {
    Instance inst;
    inst.exams = 3;
    inst.students = 1;
    inst.slots = 3;
    inst.enrollments = {{1, 2, 3}};
    const auto cm = build_conflict_matrix(inst);
    CHECK(cm.at(1, 2) == 1);
    CHECK(cm.at(1, 3) == 1);
    CHECK(cm.at(2, 3) == 1);
    CHECK(cm.at(2, 1) == 1); // symmetric
    CHECK(cm.at(1, 1) == 0); // zero diagonal
    CHECK(cm.degree(1) == 2);
    CHECK(cm.edge_count() == 3);

    Instance empty = inst;
    empty.enrollments = {{}};
    const auto zero = build_conflict_matrix(empty);
    for (int a = 1; a <= 3; ++a)
        for (int b = 1; b <= 3; ++b) CHECK(zero.at(a, b) == 0);
}

TEST_CASE("enrollment totals match recomputed conflict sums") {
    Rng rng(53);
    auto fixture = test::random_instance(15, 40, 8, rng);
    long list_total = 0;
    for (const auto& exams : fixture.inst.enrollments) list_total += static_cast<long>(exams.size());
    std::vector<long> per_exam(16, 0);
    for (const auto& exams : fixture.inst.enrollments)
        for (int e : exams) ++per_exam[e];
    long recomputed = 0;
    for (int e = 1; e <= 15; ++e) recomputed += per_exam[e];
    CHECK(list_total == recomputed);
}

TEST_CASE("hard violations") {
    Instance inst;
    inst.exams = 2;
    inst.students = 1;
    inst.slots = 3;
    inst.enrollments = {{1, 2}};
    const auto cm = build_conflict_matrix(inst);

    Timetable ok(2, 3);
    ok.assign(1, 0);
    ok.assign(2, 2);
    CHECK(hard_violations(ok, cm) == 0);

    Timetable clash(2, 3);
    clash.assign(1, 1);
    clash.assign(2, 1);
    CHECK(hard_violations(clash, cm) == 1);

    Timetable partial(2, 3);
    partial.assign(1, 0);
    CHECK_THROWS(hard_violations(partial, cm));
}

TEST_CASE("hard violations match the brute-force pair loop") {
    Rng rng(59);
    for (int trial = 0; trial < 200; ++trial) {
        auto fixture = test::random_instance(10, 20, 6, rng);
        Timetable tt(10, 6);
        std::uniform_int_distribution<int> slot(0, 5);
        for (int e = 1; e <= 10; ++e) tt.assign(e, slot(rng));
        CHECK(hard_violations(tt, fixture.cm) == test::pair_loop_violations(tt, fixture.cm));
    }
}

TEST_CASE("solution files round-trip") {
    TempDir dir;
    Rng rng(61);
    auto fixture = test::random_instance(12, 25, 7, rng);
    const auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);
    const auto path = dir.path / "sol.txt";
    write_solution(tt, path);
    const auto back = read_solution(path, 12, 7);
    CHECK(back == tt);
}

TEST_CASE("solution reading rejects malformed files") {
    TempDir dir;
    write_file(dir.path / "dup.txt", "1 0\n1 1\n2 0\n");
    CHECK_THROWS(read_solution(dir.path / "dup.txt", 2, 3));

    write_file(dir.path / "range.txt", "1 9\n2 0\n");
    CHECK_THROWS(read_solution(dir.path / "range.txt", 2, 3));

    write_file(dir.path / "missing.txt", "1 0\n");
    CHECK_THROWS(read_solution(dir.path / "missing.txt", 2, 3));
}

TEST_CASE("instance metadata file") {
    TempDir dir;
    write_file(dir.path / "instances.txt", "# name slots\nsta83 13\nhec92 18\n");
    const auto meta = read_instance_metadata(dir.path / "instances.txt");
    REQUIRE(meta.size() == 2);
    CHECK(meta[0].name == "sta83");
    CHECK(meta[0].slots == 13);
    CHECK(meta[1].name == "hec92");
    CHECK(meta[1].slots == 18);
}

TEST_CASE("adapter compatibility matches the hard-violation predicate") {
    Rng rng(67);
    for (int trial = 0; trial < 300; ++trial) {
        auto fixture = test::random_instance(10, 18, 6, rng);
        TimetablingAdapter adapter(fixture.inst, fixture.cm);

        std::vector<ConstraintId> some;
        std::uniform_int_distribution<int> coin(0, 1);
        for (int e = 1; e <= 10; ++e)
            if (coin(rng)) some.push_back(e);
        const Chromosome c = adapter.random_chromosome(some, rng);

        std::uniform_int_distribution<int> exam(1, 10), slot(0, 5);
        const int e = exam(rng);
        if (c.find(e) != nullptr) continue;
        const ConstraintAssignment g{e, slot(rng)};

        Timetable induced(10, 6);
        for (const auto& gene : c.genes) induced.assign(gene.constraint, gene.value);
        induced.assign(g.constraint, g.value);
        CHECK(adapter.compatible(g, c) ==
              (test::pair_loop_violations(induced, fixture.cm) == 0));
    }
}

TEST_CASE("timetable slot surgery keeps the assignment consistent") {
    Rng rng(71);
    auto fixture = test::random_instance(10, 20, 6, rng);
    auto tt = test::random_feasible_timetable(fixture.inst, fixture.cm, rng);

    auto check_consistency = [&](const Timetable& t) {
        int count = 0;
        for (int s = 0; s < t.slots(); ++s)
            for (int e : t.exams_in(s)) {
                CHECK(t.slot_of(e) == s);
                ++count;
            }
        CHECK(count == t.assigned_count());
    };

    tt.swap_slots(0, 3);
    check_consistency(tt);
    tt.relocate_slot(0, 5);
    check_consistency(tt);
    tt.relocate_slot(4, 1);
    check_consistency(tt);
    tt.swap_slots(2, 2);
    check_consistency(tt);
}
