#include "ichea/localsearch.hpp"

#include <algorithm>
#include <numeric>

#include "ichea/fitness.hpp"

namespace ichea {

const char* operator_name(OperatorKind kind) {
    switch (kind) {
    case OperatorKind::KempeTraditional: return "kempe_traditional";
    case OperatorKind::KempeBoundary: return "kempe_boundary";
    case OperatorKind::SwapExams: return "swap_exams";
    case OperatorKind::MoveOrSwapSlot: return "move_or_swap_slot";
    case OperatorKind::RemovalReinsert: return "removal_reinsert";
    case OperatorKind::ClusterMutation: return "cluster_mutation";
    case OperatorKind::CommunityInfluence: return "community_influence";
    case OperatorKind::KempeCrossover: return "kempe_crossover";
    }
    return "unknown";
}

Timetable kempe_chain_move(const Timetable& tt, const ConflictMatrix& cm, int slot_i, int slot_j,
                           std::span<const int> seeds) {
    require(slot_i != slot_j, "kempe move needs two distinct slots");
    require(slot_i >= 0 && slot_i < tt.slots() && slot_j >= 0 && slot_j < tt.slots(),
            "slot out of range");
    require(!seeds.empty() && seeds.size() <= 5, "kempe move takes 1-5 seeds");
    for (int e : seeds) require(tt.slot_of(e) == slot_i, "seed not in slot I");

    // BFS over the conflict graph restricted to the two slots.
    std::vector<int> frontier(seeds.begin(), seeds.end());
    std::vector<int> component(frontier);
    auto in_component = [&](int exam) {
        return std::find(component.begin(), component.end(), exam) != component.end();
    };
    while (!frontier.empty()) {
        int exam = frontier.back();
        frontier.pop_back();
        const int other_slot = tt.slot_of(exam) == slot_i ? slot_j : slot_i;
        for (int candidate : tt.exams_in(other_slot)) {
            if (!cm.conflicting(exam, candidate) || in_component(candidate)) continue;
            component.push_back(candidate);
            frontier.push_back(candidate);
        }
    }

    Timetable out = tt;
    for (int exam : component)
        out.move(exam, tt.slot_of(exam) == slot_i ? slot_j : slot_i);
    return out;
}

namespace {

std::vector<int> assigned_exams(const Timetable& tt) {
    std::vector<int> out;
    out.reserve(tt.assigned_count());
    for (int e = 1; e <= tt.exams(); ++e)
        if (tt.assigned(e)) out.push_back(e);
    return out;
}

std::vector<int> sample_seeds(const std::vector<int>& slot_members, Rng& rng) {
    const int max_seeds = static_cast<int>(std::min<std::size_t>(5, slot_members.size()));
    std::uniform_int_distribution<int> count_dist(1, max_seeds);
    const int count = count_dist(rng);
    std::vector<int> pool = slot_members;
    std::vector<int> seeds;
    seeds.reserve(count);
    for (int k = 0; k < count; ++k) {
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t at = pick(rng);
        seeds.push_back(pool[at]);
        pool.erase(pool.begin() + at);
    }
    return seeds;
}

} // namespace

Timetable boundary_kempe_move(const Timetable& tt, const ConflictMatrix& cm, Rng& rng) {
    require(tt.slots() >= 2, "boundary kempe needs at least two slots");
    std::vector<int> exams = assigned_exams(tt);
    if (exams.empty()) return tt;

    std::stable_sort(exams.begin(), exams.end(), [&](int a, int b) {
        const auto ca = proximity_contribution(tt, cm, a);
        const auto cb = proximity_contribution(tt, cm, b);
        if (ca != cb) return ca > cb;
        return a < b;
    });
    const std::size_t top = std::max<std::size_t>(1, (exams.size() + 9) / 10);
    std::uniform_int_distribution<std::size_t> pick_exam(0, top - 1);
    const int anchor = exams[pick_exam(rng)];
    const int slot_i = tt.slot_of(anchor);

    const int t = tt.slots();
    std::vector<int> ends;
    if (t > 4) {
        for (int s : {0, 1, t - 2, t - 1})
            if (s != slot_i) ends.push_back(s);
    } else {
        for (int s = 0; s < t; ++s)
            if (s != slot_i) ends.push_back(s);
    }
    std::uniform_int_distribution<std::size_t> pick_end(0, ends.size() - 1);
    const int slot_j = ends[pick_end(rng)];

    const auto seeds = sample_seeds(tt.exams_in(slot_i), rng);
    return kempe_chain_move(tt, cm, slot_i, slot_j, seeds);
}

bool RepairSet::hold(PendingSwap swap) {
    if (pending_.size() >= capacity_) return false;
    pending_.push_back(std::move(swap));
    return true;
}

std::vector<Timetable> RepairSet::repair_all(const ConflictMatrix& cm) {
    std::vector<Timetable> repaired;
    repaired.reserve(pending_.size());
    for (auto& entry : pending_) {
        const Timetable& tt = entry.original;
        const int slot_a = tt.slot_of(entry.exam_a);
        const int slot_b = tt.slot_of(entry.exam_b);
        Timetable fixed = kempe_chain_move(tt, cm, slot_a, slot_b, std::vector<int>{entry.exam_a});
        if (fixed.slot_of(entry.exam_b) == slot_b)
            fixed = kempe_chain_move(fixed, cm, slot_b, slot_a, std::vector<int>{entry.exam_b});
        if (partial_hard_violations(fixed, cm) == 0) repaired.push_back(std::move(fixed));
    }
    pending_.clear();
    return repaired;
}

std::optional<Timetable> swap_exams(const Timetable& tt, const ConflictMatrix& cm, Rng& rng,
                                    RepairSet& repair) {
    std::vector<int> exams = assigned_exams(tt);
    if (exams.size() < 2) return tt;
    std::uniform_int_distribution<std::size_t> pick(0, exams.size() - 1);
    const int a = exams[pick(rng)];
    std::vector<int> others;
    others.reserve(exams.size());
    for (int e : exams)
        if (tt.slot_of(e) != tt.slot_of(a)) others.push_back(e);
    if (others.empty()) return tt;
    std::uniform_int_distribution<std::size_t> pick_other(0, others.size() - 1);
    const int b = others[pick_other(rng)];

    Timetable swapped = tt;
    const int slot_a = tt.slot_of(a);
    const int slot_b = tt.slot_of(b);
    swapped.move(a, slot_b);
    swapped.move(b, slot_a);
    if (partial_hard_violations(swapped, cm) == 0) return swapped;

    repair.hold({tt, a, b});
    return std::nullopt;
}

Timetable move_or_swap_slot(const Timetable& tt, Rng& rng) {
    require(tt.slots() >= 2, "needs at least two slots");
    std::uniform_int_distribution<int> slot_dist(0, tt.slots() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    const int from = slot_dist(rng);
    int to = slot_dist(rng);
    while (to == from) to = slot_dist(rng);
    Timetable out = tt;
    if (coin(rng) == 0)
        out.swap_slots(from, to);
    else
        out.relocate_slot(from, to);
    return out;
}

Timetable removal_reinsert(const Timetable& tt, const ConflictMatrix& cm, Rng& rng) {
    std::vector<int> exams = assigned_exams(tt);
    if (exams.empty() || tt.slots() < 2) return tt;
    std::uniform_int_distribution<std::size_t> pick(0, exams.size() - 1);
    const int exam = exams[pick(rng)];
    std::uniform_int_distribution<int> slot_dist(0, tt.slots() - 1);
    int target = slot_dist(rng);
    while (target == tt.slot_of(exam)) target = slot_dist(rng);
    for (int member : tt.exams_in(target))
        if (cm.conflicting(exam, member)) return tt; // reject infeasible insertions
    Timetable out = tt;
    out.move(exam, target);
    return out;
}

Timetable cluster_mutation(const Timetable& tt, const ConflictMatrix& cm, Rng& rng) {
    if (tt.slots() < 2) return tt;
    std::uniform_int_distribution<int> slot_dist(0, tt.slots() - 1);
    const int slot = slot_dist(rng);
    const auto& members = tt.exams_in(slot);
    std::vector<int> cluster;
    for (int e = 1; e <= tt.exams(); ++e) {
        if (!tt.assigned(e) || tt.slot_of(e) == slot) continue;
        bool clashes = false;
        for (int member : members) {
            if (cm.conflicting(e, member)) {
                clashes = true;
                break;
            }
        }
        if (!clashes) cluster.push_back(e);
    }
    if (cluster.empty()) return tt;
    std::uniform_int_distribution<std::size_t> pick(0, cluster.size() - 1);
    Timetable out = tt;
    out.move(cluster[pick(rng)], slot);
    return out;
}

void build_communities(Population& pop, int total_communities, int community_size) {
    pop.communities.clear();
    if (pop.cop_pool.empty() || pop.csp_pool.empty()) return;

    // Anchors are the best feasible chromosomes, best first.
    std::vector<int> anchor_order(pop.cop_pool.size());
    std::iota(anchor_order.begin(), anchor_order.end(), 0);
    std::stable_sort(anchor_order.begin(), anchor_order.end(), [&](int a, int b) {
        const auto& ca = pop.cop_pool[a];
        const auto& cb = pop.cop_pool[b];
        if (ca.cost != cb.cost) return ca.cost < cb.cost;
        return digest(ca) < digest(cb);
    });

    const int communities = std::min<int>(total_communities, static_cast<int>(anchor_order.size()));
    int next_member = 0;
    for (int k = 0; k < communities; ++k) {
        Community community;
        community.anchor = anchor_order[k];
        for (int j = 0; j < community_size && next_member < static_cast<int>(pop.csp_pool.size());
             ++j, ++next_member)
            community.members.push_back(next_member);
        pop.communities.push_back(std::move(community));
        if (next_member >= static_cast<int>(pop.csp_pool.size())) break;
    }
}

void community_influence_step(Population& pop, const ProblemAdapter& problem, int degree,
                              Rng& rng) {
    for (const auto& community : pop.communities) {
        const Chromosome& anchor = pop.cop_pool[community.anchor];
        if (anchor.genes.empty()) continue;
        for (int member_index : community.members) {
            Chromosome& member = pop.csp_pool[member_index];
            std::uniform_int_distribution<std::size_t> pick(0, anchor.genes.size() - 1);
            for (int step = 0; step < degree; ++step) {
                const ConstraintAssignment& allele = anchor.genes[pick(rng)];
                auto existing = std::find_if(member.genes.begin(), member.genes.end(),
                                             [&](const ConstraintAssignment& g) {
                                                 return g.constraint == allele.constraint;
                                             });
                if (existing == member.genes.end()) {
                    const ConstraintAssignment candidate = problem.adapt_for_append(allele, member);
                    if (problem.compatible(candidate, member)) member.genes.push_back(candidate);
                    continue;
                }
                if (existing->value == allele.value) continue;
                const ConstraintAssignment backup = *existing;
                member.genes.erase(existing);
                if (problem.compatible(allele, member))
                    member.genes.push_back(allele);
                else
                    member.genes.push_back(backup);
            }
        }
    }
}

int clone_count(int rank, int pop_size, int alpha) {
    require(rank >= 1, "rank is 1-based");
    const long budget = static_cast<long>(alpha) * pop_size / rank;
    return static_cast<int>(std::min<long>(5, budget));
}

RchcStats rchc_step(std::vector<Chromosome>& pool, OperatorKind op, const EngineConfig& config,
                    Rng& rng, const RchcCallbacks& callbacks) {
    RchcStats stats;
    if (pool.empty()) return stats;

    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (pool[a].cost != pool[b].cost) return pool[a].cost < pool[b].cost;
        return digest(pool[a]) < digest(pool[b]);
    });

    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        Chromosome& member = pool[order[rank]];
        if (member.tabu_marked) continue; // excluded from parenthood by the tabu region
        const int clones = clone_count(static_cast<int>(rank) + 1,
                                       static_cast<int>(pool.size()), config.clone_constant);
        bool improved = false;
        for (int k = 0; k < clones; ++k) {
            Chromosome clone = callbacks.mutate(member, op, rng);
            clone.cost = callbacks.cost(clone);
            if (member.rchc.is_tabu_state({clone.cost, digest(clone)}, config.rchc_tabu_cost_only))
                continue;
            if (clone.cost < member.cost) {
                member.rchc.push_history({member.genes, member.cost},
                                         static_cast<std::size_t>(config.history_depth));
                member.genes = std::move(clone.genes);
                member.cost = std::move(clone.cost);
                improved = true;
                ++stats.replacements;
            }
        }
        if (improved) {
            member.rchc.stagnation = 0;
            continue;
        }
        // The incumbent best is never reverted while it leads the pool.
        if (rank == 0) continue;
        if (++member.rchc.stagnation < config.backtrack_stagnation) continue;

        member.rchc.push_tabu({member.cost, digest(member)});
        member.rchc.stagnation = 0;
        if (!member.rchc.history.empty()) {
            ChromosomeSnapshot snapshot = std::move(member.rchc.history.back());
            member.rchc.history.pop_back();
            member.genes = std::move(snapshot.genes);
            member.cost = std::move(snapshot.cost);
            ++stats.reverts;
        } else if (callbacks.fresh_feasible) {
            if (auto fresh = callbacks.fresh_feasible()) {
                fresh->cost = callbacks.cost(*fresh);
                member = std::move(*fresh);
                ++stats.removals;
            }
        }
    }
    return stats;
}

} // namespace ichea
