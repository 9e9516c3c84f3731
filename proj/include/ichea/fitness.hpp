#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ichea/core.hpp"
#include "ichea/timetabling.hpp"

namespace ichea {

/// Exact arbitrary-precision fitness value. Preference-ordered fitness
/// reaches (L^2+2)^(D+1), which overflows fixed-width integers.
using BigFitness = boost::multiprecision::cpp_int;

/// Satisfied-constraint counts per preference level: counts[p] constraints
/// satisfied at preference p, p = 0 the most preferred, D the least.
struct PreferenceHistogram {
    std::vector<std::int64_t> counts;
    std::int64_t total_constraints = 0; // L
    int lowest_preference() const { return static_cast<int>(counts.size()) - 1; } // D

    void validate() const;
};

enum class PrefSense { Max, Min };

/// Number of satisfied constraints in a full assignment.
long violation_fitness(const std::vector<int>& full_assignment, const ProblemAdapter& problem);

/// Weighted satisfaction count over a full assignment.
double weighted_fitness(const std::vector<int>& full_assignment,
                        const std::vector<double>& weights, const ProblemAdapter& problem);

/// Partial-solution cost and fitness: cost = m - |p|, fitness = |p|.
long partial_cost(const Chromosome& p, int total_constraints);
long partial_fitness(const Chromosome& p);

/// Unweighted sum of the histogram.
std::int64_t basic_pref_fitness(const PreferenceHistogram& h);

/// Weighted sum; |weights| must equal D + 1.
double weighted_pref_fitness(const PreferenceHistogram& h, const std::vector<double>& weights);

/// Preference-maximizing fitness: sum of counts[p] * (L^2+2)^(D-p), exact.
BigFitness pref_fitness_max(const PreferenceHistogram& h);

/// Low-preference-minimizing fitness: sum of (L^2 - counts[p]) * (L^2+2)^p,
/// exact. Every count must stay within the L^2 bound.
BigFitness pref_fitness_min(const PreferenceHistogram& h);

/// Count-dominant fitness: (L^2+2)^(D+1) * sum(counts) + pref_fitness_min.
BigFitness pref_fitness_combined(const PreferenceHistogram& h);

/// Overflow-free comparator, order-equivalent to pref_fitness_max (Max
/// sense) or pref_fitness_min (Min sense). Returns the ordering of the
/// fitness of `a` relative to `b` (greater = better).
std::strong_ordering pref_compare_lex(const PreferenceHistogram& a, const PreferenceHistogram& b,
                                      PrefSense sense);

/// Proximity cost as an exact rational: `numerator / students`. Division
/// happens only at display time.
struct ProximityCost {
    std::int64_t numerator = 0;
    std::int64_t students = 1;

    double value() const { return static_cast<double>(numerator) / static_cast<double>(students); }
    friend bool operator==(const ProximityCost&, const ProximityCost&) = default;
};

/// Carter proximity cost of a hard-feasible timetable: every conflicting
/// pair at slot gap g in [1, 5] contributes shared_students * 2^(5-g),
/// normalized by the student count. Also accepts partial timetables (only
/// pairs with both exams assigned contribute).
ProximityCost proximity_cost(const Timetable& tt, const ConflictMatrix& cm, int students);

/// Single exam's share of the proximity numerator, used to locate the most
/// conflicting exams.
std::int64_t proximity_contribution(const Timetable& tt, const ConflictMatrix& cm, int exam);

/// Gap histogram of a hard-feasible timetable: counts[d] = conflicting pairs
/// at gap d + 1 for d in [0, 4]; L = total conflicting pairs of the
/// instance.
PreferenceHistogram preference_histogram(const Timetable& tt, const ConflictMatrix& cm);

/// Generic-mode optimization key: conflicting-pair counts ordered worst gap
/// first, compared lexicographically (smaller is better). This is the
/// ordering pref_fitness_combined induces once the fully-spread pairs are
/// carried as a constant-sum top-preference bucket.
CostKey spread_cost_key(const Timetable& tt, const ConflictMatrix& cm);

/// Weighted-mode optimization key: the proximity numerator.
CostKey weighted_cost_key(const Timetable& tt, const ConflictMatrix& cm);

} // namespace ichea
