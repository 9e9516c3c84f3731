#include "ichea/fitness.hpp"

#include <cstdlib>

namespace ichea {

void PreferenceHistogram::validate() const {
    require(total_constraints > 0, "histogram requires L > 0");
    require(counts.size() >= 2, "histogram requires D > 0");
    for (std::int64_t c : counts) require(c >= 0, "histogram counts must be non-negative");
}

namespace {

BigFitness histogram_base(const PreferenceHistogram& h) {
    BigFitness l2 = BigFitness(h.total_constraints) * h.total_constraints;
    return l2 + 2;
}

} // namespace

long violation_fitness(const std::vector<int>& full_assignment, const ProblemAdapter& problem) {
    const int m = problem.constraint_count();
    require(static_cast<int>(full_assignment.size()) == m, "partial assignment");
    long satisfied = 0;
    for (int i = 0; i < m; ++i) {
        Chromosome others;
        others.genes.reserve(m - 1);
        for (int j = 0; j < m; ++j)
            if (j != i) others.genes.push_back({j + 1, full_assignment[j]});
        if (problem.compatible({i + 1, full_assignment[i]}, others)) ++satisfied;
    }
    return satisfied;
}

double weighted_fitness(const std::vector<int>& full_assignment,
                        const std::vector<double>& weights, const ProblemAdapter& problem) {
    const int m = problem.constraint_count();
    require(static_cast<int>(full_assignment.size()) == m, "partial assignment");
    require(static_cast<int>(weights.size()) == m, "weight vector length mismatch");
    for (double w : weights) require(w >= 0.0, "weights must be non-negative");
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        Chromosome others;
        others.genes.reserve(m - 1);
        for (int j = 0; j < m; ++j)
            if (j != i) others.genes.push_back({j + 1, full_assignment[j]});
        if (problem.compatible({i + 1, full_assignment[i]}, others)) total += weights[i];
    }
    return total;
}

long partial_cost(const Chromosome& p, int total_constraints) {
    require(p.length() <= total_constraints, "partial solution longer than constraint count");
    return total_constraints - p.length();
}

long partial_fitness(const Chromosome& p) { return p.length(); }

std::int64_t basic_pref_fitness(const PreferenceHistogram& h) {
    h.validate();
    std::int64_t sum = 0;
    for (std::int64_t c : h.counts) sum += c;
    return sum;
}

double weighted_pref_fitness(const PreferenceHistogram& h, const std::vector<double>& weights) {
    h.validate();
    require(weights.size() == h.counts.size(), "weight vector length mismatch");
    double total = 0.0;
    for (std::size_t p = 0; p < h.counts.size(); ++p)
        total += weights[p] * static_cast<double>(h.counts[p]);
    return total;
}

BigFitness pref_fitness_max(const PreferenceHistogram& h) {
    h.validate();
    const BigFitness base = histogram_base(h);
    const int d = h.lowest_preference();
    BigFitness total = 0;
    BigFitness power = 1; // base^(D-p), built from p = D downwards
    for (int p = d; p >= 0; --p) {
        total += power * h.counts[p];
        power *= base;
    }
    return total;
}

BigFitness pref_fitness_min(const PreferenceHistogram& h) {
    h.validate();
    const BigFitness base = histogram_base(h);
    const BigFitness bound = BigFitness(h.total_constraints) * h.total_constraints;
    BigFitness total = 0;
    BigFitness power = 1; // base^p
    for (std::size_t p = 0; p < h.counts.size(); ++p) {
        require(h.counts[p] <= bound, "histogram exceeds bound");
        total += power * (bound - h.counts[p]);
        power *= base;
    }
    return total;
}

BigFitness pref_fitness_combined(const PreferenceHistogram& h) {
    h.validate();
    const BigFitness base = histogram_base(h);
    BigFitness scale = 1;
    for (int p = 0; p <= h.lowest_preference() + 1; ++p) scale *= base;
    return scale * basic_pref_fitness(h) + pref_fitness_min(h);
}

std::strong_ordering pref_compare_lex(const PreferenceHistogram& a, const PreferenceHistogram& b,
                                      PrefSense sense) {
    require(a.counts.size() == b.counts.size() && a.total_constraints == b.total_constraints,
            "histogram dimensions mismatch");
    if (sense == PrefSense::Max) {
        // Higher count at the most preferred differing level wins.
        for (std::size_t p = 0; p < a.counts.size(); ++p) {
            if (a.counts[p] != b.counts[p])
                return a.counts[p] < b.counts[p] ? std::strong_ordering::less
                                                 : std::strong_ordering::greater;
        }
        return std::strong_ordering::equal;
    }
    // Lower count at the least preferred differing level wins.
    for (std::size_t p = a.counts.size(); p-- > 0;) {
        if (a.counts[p] != b.counts[p])
            return a.counts[p] > b.counts[p] ? std::strong_ordering::less
                                             : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

namespace {

constexpr int kProximityWindow = 5;

// 2^(5-g) for gap g in [1, 5].
constexpr std::int64_t gap_weight(int gap) { return std::int64_t{1} << (kProximityWindow - gap); }

template <typename PairVisitor>
void for_each_conflicting_assigned_pair(const Timetable& tt, const ConflictMatrix& cm,
                                        PairVisitor&& visit) {
    const int exams = tt.exams();
    for (int a = 1; a <= exams; ++a) {
        if (!tt.assigned(a)) continue;
        for (int b : cm.neighbours(a)) {
            if (b <= a || !tt.assigned(b)) continue;
            const int gap = std::abs(tt.slot_of(a) - tt.slot_of(b));
            visit(a, b, cm.at(a, b), gap);
        }
    }
}

} // namespace

ProximityCost proximity_cost(const Timetable& tt, const ConflictMatrix& cm, int students) {
    require(students > 0, "student count must be positive");
    ProximityCost cost{0, students};
    for_each_conflicting_assigned_pair(tt, cm, [&](int, int, int shared, int gap) {
        require(gap != 0, "hard violation");
        if (gap <= kProximityWindow) cost.numerator += static_cast<std::int64_t>(shared) * gap_weight(gap);
    });
    return cost;
}

std::int64_t proximity_contribution(const Timetable& tt, const ConflictMatrix& cm, int exam) {
    if (!tt.assigned(exam)) return 0;
    std::int64_t total = 0;
    for (int other : cm.neighbours(exam)) {
        if (!tt.assigned(other)) continue;
        const int gap = std::abs(tt.slot_of(exam) - tt.slot_of(other));
        if (gap >= 1 && gap <= kProximityWindow)
            total += static_cast<std::int64_t>(cm.at(exam, other)) * gap_weight(gap);
    }
    return total;
}

PreferenceHistogram preference_histogram(const Timetable& tt, const ConflictMatrix& cm) {
    PreferenceHistogram h;
    h.counts.assign(kProximityWindow, 0);
    h.total_constraints = cm.edge_count();
    for_each_conflicting_assigned_pair(tt, cm, [&](int, int, int, int gap) {
        require(gap != 0, "hard violation");
        if (gap <= kProximityWindow) ++h.counts[gap - 1];
    });
    return h;
}

CostKey spread_cost_key(const Timetable& tt, const ConflictMatrix& cm) {
    PreferenceHistogram h = preference_histogram(tt, cm);
    return CostKey{{h.counts.begin(), h.counts.end()}};
}

CostKey weighted_cost_key(const Timetable& tt, const ConflictMatrix& cm) {
    std::int64_t numerator = 0;
    for_each_conflicting_assigned_pair(tt, cm, [&](int, int, int shared, int gap) {
        require(gap != 0, "hard violation");
        if (gap <= kProximityWindow) numerator += static_cast<std::int64_t>(shared) * gap_weight(gap);
    });
    return CostKey{{numerator}};
}

} // namespace ichea
