#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ichea/core.hpp"
#include "ichea/localsearch.hpp"
#include "ichea/timetabling.hpp"

namespace ichea {

/// Duplicate detection over two value lists: the marker vector gains 1 at
/// the first list's values and 10 at the second's, so value 1 marks the
/// first list's unique values, 10 the second's, and 11 the duplicates.
struct NonDuplicateSets {
    std::vector<int> marker;  // length = domain size
    std::vector<int> first;   // values unique to the first list, ascending
    std::vector<int> second;  // values unique to the second list, ascending
    std::size_t ops = 0;      // marker writes plus the scan
};

/// Values must lie in [0, domain_size).
NonDuplicateSets mark_nonduplicates(std::span<const int> first, std::span<const int> second,
                                    int domain_size);

/// Outcome of one fusion direction.
struct FusionReport {
    Chromosome offspring;
    int appended = 0; // non-duplicate alleles accepted
    int rejected = 0; // non-duplicate alleles dropped for incompatibility
    std::size_t ops = 0;
};

struct FusionPair {
    FusionReport first;  // offspring seeded from the first parent
    FusionReport second; // offspring seeded from the second parent
    /// Elementary operations of the whole crossover: the shared duplicate
    /// scan plus both append passes. Stays within
    /// (l1 + l2 + N) + N * (l1' + l2').
    std::size_t total_ops = 0;
};

/// Discrete intermarriage crossover: each offspring starts as a copy of one
/// parent and absorbs the other parent's non-duplicate alleles, in donor
/// gene order, dropping any that are incompatible. Offspring never shrink.
FusionPair intermarriage_fuse(const Chromosome& a, const Chromosome& b,
                              const ProblemAdapter& problem);

/// Same crossover without re-validating the parents, for callers that
/// guarantee the feasible-partial invariant (instrumentation harnesses, the
/// engine's own pools).
FusionPair intermarriage_fuse_unchecked(const Chromosome& a, const Chromosome& b,
                                        const ProblemAdapter& problem);

/// Acceptance rule for a fusion offspring: strictly longer always enters the
/// pool; equal length only with a different digest.
bool fusion_accepts(const FusionReport& offspring, const Chromosome& parent);

/// Relocates, for each position q in `positions`, the value b[q] to
/// position q of `a` (remove then insert, shifting the values in between).
/// Both chromosomes must be equal-length permutations of the same values.
std::vector<int> influence_move(const std::vector<int>& a, const std::vector<int>& b,
                                std::span<const std::size_t> positions);

/// One influence application: pulls the receiver toward the donor.
using InfluenceFn =
    std::function<void(/*receiver*/ std::vector<int>&, /*donor*/ const std::vector<int>&, Rng&)>;

/// The four-step best-guided exchange: each chromosome is influenced by its
/// partner and then by the incumbent best.
std::pair<std::vector<int>, std::vector<int>>
best_guided_exchange(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& best, const InfluenceFn& influence, Rng& rng);

/// Influence step for permutation chromosomes: relocates `degree` random
/// donor alleles into the receiver.
InfluenceFn permutation_influence(int degree);

/// Influence of timetable `a` by donor `b` with respect to exam `e`: `a` is
/// pulled so that `e` sits in the slot position it occupies in `b`, using a
/// Kempe component swap so feasibility survives the move.
Timetable kempe_crossover(const Timetable& a, const Timetable& b, const ConflictMatrix& cm,
                          int exam);

/// Timetable form of the best-guided exchange: each influence step applies
/// kempe_crossover for `degree` random exams.
std::pair<Timetable, Timetable> best_guided_exchange_tt(const Timetable& a, const Timetable& b,
                                                        const Timetable& best,
                                                        const ConflictMatrix& cm, int degree,
                                                        Rng& rng);

} // namespace ichea
