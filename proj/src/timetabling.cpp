#include "ichea/timetabling.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ichea {

void ConflictMatrix::build_adjacency() const {
    adjacency_.assign(static_cast<std::size_t>(exams_) + 1, {});
    for (int a = 1; a <= exams_; ++a)
        for (int b = 1; b <= exams_; ++b)
            if (conflicting(a, b)) adjacency_[a].push_back(b);
}

const std::vector<int>& ConflictMatrix::neighbours(int exam) const {
    if (adjacency_.empty()) build_adjacency();
    return adjacency_[exam];
}

int ConflictMatrix::degree(int exam) const {
    return static_cast<int>(neighbours(exam).size());
}

long ConflictMatrix::edge_count() const {
    long edges = 0;
    for (int a = 1; a <= exams_; ++a)
        edges += static_cast<long>(neighbours(a).size());
    return edges / 2;
}

void Timetable::assign(int exam, int slot) {
    require(slot_of_[exam] == kUnassigned, "exam already assigned");
    require(slot >= 0 && slot < slots_, "slot out of range");
    slot_of_[exam] = slot;
    auto& m = members_[slot];
    m.insert(std::lower_bound(m.begin(), m.end(), exam), exam);
    ++assigned_;
}

void Timetable::unassign(int exam) {
    int slot = slot_of_[exam];
    require(slot != kUnassigned, "exam not assigned");
    auto& m = members_[slot];
    m.erase(std::find(m.begin(), m.end(), exam));
    slot_of_[exam] = kUnassigned;
    --assigned_;
}

void Timetable::move(int exam, int slot) {
    if (slot_of_[exam] != kUnassigned) unassign(exam);
    assign(exam, slot);
}

void Timetable::swap_slots(int a, int b) {
    if (a == b) return;
    std::swap(members_[a], members_[b]);
    for (int e : members_[a]) slot_of_[e] = a;
    for (int e : members_[b]) slot_of_[e] = b;
}

void Timetable::relocate_slot(int from, int to) {
    if (from == to) return;
    auto moved = std::move(members_[from]);
    members_.erase(members_.begin() + from);
    members_.insert(members_.begin() + to, std::move(moved));
    for (int s = 0; s < slots_; ++s)
        for (int e : members_[s]) slot_of_[e] = s;
}

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& file, int line, const std::string& what) {
    throw std::runtime_error(file.string() + ":" + std::to_string(line) + ": " + what);
}

} // namespace

Instance parse_instance(const std::filesystem::path& crs_file,
                        const std::filesystem::path& stu_file, int slots,
                        std::ostream* warnings) {
    require(slots > 0, "slot count must be positive");

    std::ifstream crs(crs_file);
    if (!crs) throw std::runtime_error("cannot open " + crs_file.string());

    std::vector<long> declared; // enrollment per exam id, index 0 unused
    declared.push_back(0);
    std::string line;
    int lineno = 0;
    while (std::getline(crs, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        int exam_id = 0;
        long count = 0;
        if (!(ss >> exam_id >> count) || exam_id <= 0 || count < 0)
            parse_error(crs_file, lineno, "malformed exam line");
        if (exam_id >= static_cast<int>(declared.size())) declared.resize(exam_id + 1, -1);
        if (declared[exam_id] >= 0) parse_error(crs_file, lineno, "duplicate exam id");
        declared[exam_id] = count;
    }
    const int exams = static_cast<int>(declared.size()) - 1;
    if (exams <= 0) throw std::runtime_error(crs_file.string() + ": no exams");
    for (int e = 1; e <= exams; ++e)
        if (declared[e] < 0) throw std::runtime_error(crs_file.string() + ": missing exam " + std::to_string(e));

    std::ifstream stu(stu_file);
    if (!stu) throw std::runtime_error("cannot open " + stu_file.string());

    Instance inst;
    inst.exams = exams;
    inst.slots = slots;
    lineno = 0;
    while (std::getline(stu, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        std::vector<int> taken;
        int exam_id = 0;
        while (ss >> exam_id) {
            if (exam_id < 1 || exam_id > exams)
                parse_error(stu_file, lineno, "exam id out of range");
            taken.push_back(exam_id);
        }
        if (!ss.eof()) parse_error(stu_file, lineno, "malformed student line");
        inst.enrollments.push_back(std::move(taken));
    }
    inst.students = static_cast<int>(inst.enrollments.size());
    if (inst.students == 0) throw std::runtime_error(stu_file.string() + ": no students");

    std::vector<long> recomputed(exams + 1, 0);
    for (const auto& exams_of_student : inst.enrollments)
        for (int e : exams_of_student) ++recomputed[e];
    if (warnings) {
        for (int e = 1; e <= exams; ++e) {
            if (recomputed[e] != declared[e])
                *warnings << "warning: exam " << e << " enrollment mismatch (declared "
                          << declared[e] << ", counted " << recomputed[e] << ")\n";
        }
    }
    return inst;
}

ConflictMatrix build_conflict_matrix(const Instance& inst) {
    ConflictMatrix cm(inst.exams);
    for (const auto& exams_of_student : inst.enrollments) {
        for (std::size_t i = 0; i < exams_of_student.size(); ++i)
            for (std::size_t j = i + 1; j < exams_of_student.size(); ++j)
                cm.add(exams_of_student[i], exams_of_student[j], 1);
    }
    cm.build_adjacency();
    return cm;
}

long partial_hard_violations(const Timetable& tt, const ConflictMatrix& cm) {
    long violations = 0;
    for (int s = 0; s < tt.slots(); ++s) {
        const auto& members = tt.exams_in(s);
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                if (cm.conflicting(members[i], members[j])) ++violations;
    }
    return violations;
}

long hard_violations(const Timetable& tt, const ConflictMatrix& cm) {
    for (int e = 1; e <= tt.exams(); ++e)
        require(tt.assigned(e), "unassigned exam " + std::to_string(e));
    return partial_hard_violations(tt, cm);
}

void write_solution(const Timetable& tt, const std::filesystem::path& path) {
    require(tt.total(), "incomplete solution");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (int e = 1; e <= tt.exams(); ++e)
        out << e << ' ' << tt.slot_of(e) << '\n';
}

Timetable read_solution(const std::filesystem::path& path, int exams, int slots) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    Timetable tt(exams, slots);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        int exam = 0, slot = 0;
        if (!(ss >> exam >> slot)) parse_error(path, lineno, "malformed solution line");
        if (exam < 1 || exam > exams) parse_error(path, lineno, "exam id out of range");
        if (slot < 0 || slot >= slots) parse_error(path, lineno, "slot out of range");
        if (tt.assigned(exam)) parse_error(path, lineno, "duplicate exam line");
        tt.assign(exam, slot);
    }
    if (!tt.total()) throw std::runtime_error(path.string() + ": incomplete solution");
    return tt;
}

std::vector<InstanceMeta> read_instance_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<InstanceMeta> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream ss(line);
        InstanceMeta meta;
        if (!(ss >> meta.name >> meta.slots) || meta.slots <= 0)
            parse_error(path, lineno, "malformed metadata line");
        out.push_back(std::move(meta));
    }
    return out;
}

std::vector<int> TimetablingAdapter::domain(ConstraintId) const {
    std::vector<int> slots(inst_->slots);
    for (int s = 0; s < inst_->slots; ++s) slots[s] = s;
    return slots;
}

bool TimetablingAdapter::compatible(const ConstraintAssignment& a, const Chromosome& c) const {
    for (const auto& g : c.genes) {
        if (g.constraint == a.constraint) return false;
        if (g.value == a.value && cm_->conflicting(a.constraint, g.constraint)) return false;
    }
    return true;
}

Timetable TimetablingAdapter::to_timetable(const Chromosome& c) const {
    Timetable tt(inst_->exams, inst_->slots);
    for (const auto& g : c.genes) tt.assign(g.constraint, g.value);
    return tt;
}

Chromosome TimetablingAdapter::to_chromosome(const Timetable& tt) const {
    Chromosome c;
    c.genes.reserve(tt.assigned_count());
    for (int e = 1; e <= tt.exams(); ++e)
        if (tt.assigned(e)) c.genes.push_back({e, tt.slot_of(e)});
    return c;
}

} // namespace ichea
