#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ichea/core.hpp"

namespace ichea {

/// One uncapacitated exam-timetabling instance: exams with 1-based ids,
/// per-student enrollment lists, and a fixed timeslot count.
struct Instance {
    std::string name;
    int exams = 0;    // E
    int students = 0; // S
    int slots = 0;    // T
    std::vector<std::vector<int>> enrollments; // one exam-id list per student
};

/// Symmetric exam x exam matrix of shared-student counts with zero diagonal.
class ConflictMatrix {
public:
    ConflictMatrix() = default;
    explicit ConflictMatrix(int exams) : exams_(exams), counts_(static_cast<std::size_t>(exams) * exams, 0) {}

    int exams() const { return exams_; }
    int at(int a, int b) const { return counts_[index(a, b)]; }
    void add(int a, int b, int delta) {
        if (a == b) return;
        counts_[index(a, b)] += delta;
        counts_[index(b, a)] += delta;
        adjacency_.clear();
    }
    bool conflicting(int a, int b) const { return a != b && at(a, b) > 0; }

    /// Number of distinct exams conflicting with `exam`.
    int degree(int exam) const;
    /// Distinct conflicting exam ids, ascending.
    const std::vector<int>& neighbours(int exam) const;
    /// Total number of conflicting (unordered) exam pairs.
    long edge_count() const;

    /// Precomputes the neighbour lists; add() invalidates them. Call this
    /// before sharing the matrix across threads (neighbours() otherwise
    /// builds the cache on first use).
    void build_adjacency() const;

private:
    std::size_t index(int a, int b) const {
        return static_cast<std::size_t>(a - 1) * exams_ + static_cast<std::size_t>(b - 1);
    }

    int exams_ = 0;
    std::vector<int> counts_;
    mutable std::vector<std::vector<int>> adjacency_; // [exam], empty until built
};

/// Assignment of exams to timeslots. May be partial while a solution is
/// being built; all queries treat unassigned exams as absent.
class Timetable {
public:
    static constexpr int kUnassigned = -1;

    Timetable() = default;
    Timetable(int exams, int slots)
        : slots_(slots), slot_of_(static_cast<std::size_t>(exams) + 1, kUnassigned),
          members_(static_cast<std::size_t>(slots)) {}

    int exams() const { return static_cast<int>(slot_of_.size()) - 1; }
    int slots() const { return slots_; }
    bool assigned(int exam) const { return slot_of_[exam] != kUnassigned; }
    int slot_of(int exam) const { return slot_of_[exam]; }
    const std::vector<int>& exams_in(int slot) const { return members_[slot]; }
    int assigned_count() const { return assigned_; }
    bool total() const { return assigned_ == exams(); }

    void assign(int exam, int slot);
    void unassign(int exam);
    /// Moves `exam` to `slot` (assigning it if currently unassigned).
    void move(int exam, int slot);
    /// Exchanges the full contents of two slots.
    void swap_slots(int a, int b);
    /// Removes the slot at position `from` and reinserts it at `to`,
    /// shifting the slots in between.
    void relocate_slot(int from, int to);

    friend bool operator==(const Timetable&, const Timetable&) = default;

private:
    int slots_ = 0;
    int assigned_ = 0;
    std::vector<int> slot_of_;              // exam id -> slot, [0] unused
    std::vector<std::vector<int>> members_; // slot -> ascending exam ids
};

/// Parses a Toronto-format instance: `crs` lines are `exam_id enrollment`,
/// `stu` lines are the exam ids of one student. Recomputed enrollment counts
/// are cross-checked against the crs file; mismatches warn on `warnings`
/// rather than fail since some distributions disagree.
Instance parse_instance(const std::filesystem::path& crs_file,
                        const std::filesystem::path& stu_file, int slots,
                        std::ostream* warnings = nullptr);

ConflictMatrix build_conflict_matrix(const Instance& inst);

/// Number of conflicting unordered pairs sharing a slot; 0 iff hard-feasible.
/// Requires a total timetable.
long hard_violations(const Timetable& tt, const ConflictMatrix& cm);

/// Same count restricted to assigned exams, for partial timetables.
long partial_hard_violations(const Timetable& tt, const ConflictMatrix& cm);

void write_solution(const Timetable& tt, const std::filesystem::path& path);
Timetable read_solution(const std::filesystem::path& path, int exams, int slots);

/// Instance metadata file: one `name slot_count` line per instance.
struct InstanceMeta {
    std::string name;
    int slots = 0;
};
std::vector<InstanceMeta> read_instance_metadata(const std::filesystem::path& path);

/// Problem-adapter view of an instance: constraint i = exam i, domain =
/// slots, compatibility = no shared-student pair inside one slot.
class TimetablingAdapter final : public ProblemAdapter {
public:
    TimetablingAdapter(const Instance& inst, const ConflictMatrix& cm)
        : inst_(&inst), cm_(&cm) {}

    int constraint_count() const override { return inst_->exams; }
    std::vector<int> domain(ConstraintId) const override;
    bool compatible(const ConstraintAssignment& a, const Chromosome& c) const override;
    int strength(ConstraintId constraint) const override { return cm_->degree(constraint); }
    bool has_soft_cost() const override { return true; }

    const Instance& instance() const { return *inst_; }
    const ConflictMatrix& conflicts() const { return *cm_; }

    Timetable to_timetable(const Chromosome& c) const;
    Chromosome to_chromosome(const Timetable& tt) const;

private:
    const Instance* inst_;
    const ConflictMatrix* cm_;
};

} // namespace ichea
