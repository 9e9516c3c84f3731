#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "ichea/core.hpp"
#include "ichea/timetabling.hpp"

namespace ichea {

/// The optimization-phase mutation operators, cycled in this order.
enum class OperatorKind {
    KempeTraditional,
    KempeBoundary,
    SwapExams,
    MoveOrSwapSlot,
    RemovalReinsert,
    ClusterMutation,
    CommunityInfluence,
    KempeCrossover,
};
inline constexpr int kOperatorCount = 8;

const char* operator_name(OperatorKind kind);

/// Cycles through the operators: `s` consecutive non-improving generations
/// advance to the next one, any improvement resets the counter.
class OperatorSequencer {
public:
    explicit OperatorSequencer(int stagnant_generations)
        : threshold_(stagnant_generations) {}

    OperatorKind current() const { return current_; }
    OperatorKind next_operator(bool improved) {
        if (improved) {
            stagnant_ = 0;
            return current_;
        }
        if (++stagnant_ >= threshold_) {
            stagnant_ = 0;
            current_ = static_cast<OperatorKind>((static_cast<int>(current_) + 1) % kOperatorCount);
        }
        return current_;
    }

private:
    int threshold_;
    int stagnant_ = 0;
    OperatorKind current_ = OperatorKind::KempeTraditional;
};

/// Swaps the slot membership (I <-> J) of the connected component containing
/// `seeds` in the conflict graph restricted to the exams of slots I and J.
/// Seeds must lie in slot I; the component closure is what "moving
/// conflicting exams back and forth until no conflicts remain" terminates
/// at, so the result is hard-feasible whenever the input is.
Timetable kempe_chain_move(const Timetable& tt, const ConflictMatrix& cm, int slot_i, int slot_j,
                           std::span<const int> seeds);

/// Kempe move anchored at one of the most conflicting exams (top 10% by
/// individual proximity contribution), targeting one of the two outermost
/// slots at either end of the timetable.
Timetable boundary_kempe_move(const Timetable& tt, const ConflictMatrix& cm, Rng& rng);

/// Infeasible raw exam swaps parked for Kempe repair.
class RepairSet {
public:
    struct PendingSwap {
        Timetable original;
        int exam_a = 0;
        int exam_b = 0;
    };

    explicit RepairSet(std::size_t capacity) : capacity_(capacity) {}

    bool hold(PendingSwap swap);
    /// Repairs every held entry with Kempe component swaps; infeasible
    /// outcomes are discarded. The set is empty afterwards.
    std::vector<Timetable> repair_all(const ConflictMatrix& cm);

    std::size_t held() const { return pending_.size(); }

private:
    std::size_t capacity_;
    std::vector<PendingSwap> pending_;
};

/// Exchanges the slots of two random exams. A feasible swap is returned
/// directly; an infeasible one is parked in `repair` and nullopt returned.
std::optional<Timetable> swap_exams(const Timetable& tt, const ConflictMatrix& cm, Rng& rng,
                                    RepairSet& repair);

/// Either swaps the contents of two random slots or relocates one slot to a
/// different position. Never affects feasibility.
Timetable move_or_swap_slot(const Timetable& tt, Rng& rng);

/// Moves one random exam to one random other slot, keeping the original
/// timetable when the move would violate a constraint.
Timetable removal_reinsert(const Timetable& tt, const ConflictMatrix& cm, Rng& rng);

/// Moves into a random slot one exam drawn from the cluster of exams that
/// slot could also host without conflict; identity when the cluster is
/// empty.
Timetable cluster_mutation(const Timetable& tt, const ConflictMatrix& cm, Rng& rng);

/// Splits the infeasible pool into communities around the best feasible
/// anchors. Community k takes the k-th best feasible chromosome and up to
/// `community_size` infeasible members.
void build_communities(Population& pop, int total_communities, int community_size);

/// Pulls every community member a few alleles closer to its anchor,
/// preserving the feasible-partial invariant. Members that reach
/// `active_constraints` genes are increment-feasible; the caller migrates
/// them.
void community_influence_step(Population& pop, const ProblemAdapter& problem, int degree,
                              Rng& rng);

/// Per-individual clone budget: min(5, floor(alpha * pop_size / rank)).
int clone_count(int rank, int pop_size, int alpha);

struct RchcCallbacks {
    /// Cost of a candidate (smaller is better).
    std::function<CostKey(const Chromosome&)> cost;
    /// One application of the given mutation operator.
    std::function<Chromosome(const Chromosome&, OperatorKind, Rng&)> mutate;
    /// Fresh feasible solution used when a reverted individual runs out of
    /// history. May fail.
    std::function<std::optional<Chromosome>()> fresh_feasible;
};

struct RchcStats {
    int replacements = 0; // clones that beat their incumbent
    int reverts = 0;
    int removals = 0;
};

/// One generation of revertible clonal hill-climbing over a feasible pool:
/// rank members, clone, mutate, replace on improvement (pushing the old
/// state on the member's history), revert stagnant members to their
/// previous state while marking the abandoned one tabu, and replace members
/// whose history is exhausted.
RchcStats rchc_step(std::vector<Chromosome>& pool, OperatorKind op, const EngineConfig& config,
                    Rng& rng, const RchcCallbacks& callbacks);

} // namespace ichea
