#include "ichea/crossover.hpp"

#include <algorithm>

namespace ichea {

NonDuplicateSets mark_nonduplicates(std::span<const int> first, std::span<const int> second,
                                    int domain_size) {
    NonDuplicateSets out;
    out.marker.assign(domain_size, 0);
    for (int v : first) {
        require(v >= 0 && v < domain_size, "allele out of range");
        out.marker[v] += 1;
        ++out.ops;
    }
    for (int v : second) {
        require(v >= 0 && v < domain_size, "allele out of range");
        out.marker[v] += 10;
        ++out.ops;
    }
    for (int v = 0; v < domain_size; ++v) {
        if (out.marker[v] == 1) out.first.push_back(v);
        else if (out.marker[v] == 10) out.second.push_back(v);
        ++out.ops;
    }
    return out;
}

namespace {

// Appends the donor's non-duplicate alleles to a copy of the receiver, in
// donor gene order, counting one operation per compatibility comparison.
FusionReport fuse_into(const Chromosome& receiver, const Chromosome& donor,
                       const std::vector<int>& donor_unique, const ProblemAdapter& problem) {
    FusionReport report;
    report.offspring.genes = receiver.genes;
    for (const auto& gene : donor.genes) {
        const int key = problem.fusion_key(gene);
        if (!std::binary_search(donor_unique.begin(), donor_unique.end(), key)) continue;
        report.ops += report.offspring.genes.size();
        const ConstraintAssignment candidate = problem.adapt_for_append(gene, report.offspring);
        if (problem.compatible(candidate, report.offspring)) {
            report.offspring.genes.push_back(candidate);
            ++report.appended;
        } else {
            ++report.rejected;
        }
    }
    return report;
}

} // namespace

FusionPair intermarriage_fuse(const Chromosome& a, const Chromosome& b,
                              const ProblemAdapter& problem) {
    require(is_feasible_partial(a, problem) && is_feasible_partial(b, problem),
            "broken invariant: infeasible parent");
    return intermarriage_fuse_unchecked(a, b, problem);
}

FusionPair intermarriage_fuse_unchecked(const Chromosome& a, const Chromosome& b,
                                        const ProblemAdapter& problem) {
    std::vector<int> keys_a, keys_b;
    keys_a.reserve(a.genes.size());
    keys_b.reserve(b.genes.size());
    for (const auto& g : a.genes) keys_a.push_back(problem.fusion_key(g));
    for (const auto& g : b.genes) keys_b.push_back(problem.fusion_key(g));

    const NonDuplicateSets sets =
        mark_nonduplicates(keys_a, keys_b, problem.fusion_domain_size());

    FusionPair pair;
    pair.first = fuse_into(a, b, sets.second, problem);
    pair.second = fuse_into(b, a, sets.first, problem);
    pair.total_ops = sets.ops + pair.first.ops + pair.second.ops;
    pair.first.ops += sets.ops;
    pair.second.ops += sets.ops;
    return pair;
}

bool fusion_accepts(const FusionReport& offspring, const Chromosome& parent) {
    if (offspring.offspring.length() > parent.length()) return true;
    if (offspring.offspring.length() < parent.length()) return false;
    return digest(offspring.offspring) != digest(parent);
}

std::vector<int> influence_move(const std::vector<int>& a, const std::vector<int>& b,
                                std::span<const std::size_t> positions) {
    require(a.size() == b.size(), "chromosome lengths differ");
    std::vector<int> out = a;
    for (std::size_t q : positions) {
        require(q < out.size(), "position out of range");
        const int value = b[q];
        auto at = std::find(out.begin(), out.end(), value);
        require(at != out.end(), "chromosomes are not permutations of the same values");
        out.erase(at);
        out.insert(out.begin() + q, value);
    }
    return out;
}

InfluenceFn permutation_influence(int degree) {
    return [degree](std::vector<int>& receiver, const std::vector<int>& donor, Rng& rng) {
        if (receiver.empty()) return;
        std::uniform_int_distribution<std::size_t> pick(0, receiver.size() - 1);
        std::vector<std::size_t> positions;
        positions.reserve(degree);
        for (int k = 0; k < degree; ++k) positions.push_back(pick(rng));
        receiver = influence_move(receiver, donor, positions);
    };
}

std::pair<std::vector<int>, std::vector<int>>
best_guided_exchange(const std::vector<int>& a, const std::vector<int>& b,
                     const std::vector<int>& best, const InfluenceFn& influence, Rng& rng) {
    std::vector<int> a_out = a;
    std::vector<int> b_out = b;
    influence(a_out, b, rng);    // P_i' = P_i x P_j
    influence(b_out, a, rng);    // P_j' = P_j x P_i
    influence(a_out, best, rng); // P_i' = P_i' x P_best
    influence(b_out, best, rng); // P_j' = P_j' x P_best
    return {std::move(a_out), std::move(b_out)};
}

Timetable kempe_crossover(const Timetable& a, const Timetable& b, const ConflictMatrix& cm,
                          int exam) {
    require(exam >= 1 && exam <= a.exams(), "unknown exam");
    require(a.assigned(exam) && b.assigned(exam), "unknown exam");
    const int target_slot = b.slot_of(exam); // slot position taken from the donor
    const int current_slot = a.slot_of(exam);
    if (target_slot == current_slot) return a;
    const int seed = exam;
    return kempe_chain_move(a, cm, current_slot, target_slot, std::span(&seed, 1));
}

namespace {

Timetable timetable_influence(const Timetable& receiver, const Timetable& donor,
                              const ConflictMatrix& cm, int degree, Rng& rng) {
    std::vector<int> exams;
    for (int e = 1; e <= receiver.exams(); ++e)
        if (receiver.assigned(e) && donor.assigned(e)) exams.push_back(e);
    if (exams.empty()) return receiver;
    Timetable out = receiver;
    std::uniform_int_distribution<std::size_t> pick(0, exams.size() - 1);
    for (int k = 0; k < degree; ++k)
        out = kempe_crossover(out, donor, cm, exams[pick(rng)]);
    return out;
}

} // namespace

std::pair<Timetable, Timetable> best_guided_exchange_tt(const Timetable& a, const Timetable& b,
                                                        const Timetable& best,
                                                        const ConflictMatrix& cm, int degree,
                                                        Rng& rng) {
    Timetable a_out = timetable_influence(a, b, cm, degree, rng);
    Timetable b_out = timetable_influence(b, a, cm, degree, rng);
    a_out = timetable_influence(a_out, best, cm, degree, rng);
    b_out = timetable_influence(b_out, best, cm, degree, rng);
    return {std::move(a_out), std::move(b_out)};
}

} // namespace ichea
