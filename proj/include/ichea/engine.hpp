#pragma once

#include <chrono>
#include <limits>
#include <string>
#include <vector>

#include "ichea/core.hpp"
#include "ichea/fitness.hpp"
#include "ichea/localsearch.hpp"
#include "ichea/timetabling.hpp"

namespace ichea {

/// Constraints split into ordered batches, strongest first. Every batch
/// except possibly the last holds ceil(fraction * m) constraints.
struct IncrementPlan {
    std::vector<std::vector<ConstraintId>> batches;

    static IncrementPlan build(const ProblemAdapter& problem, double fraction);
    int total_constraints() const;
};

/// Exams ordered by decreasing conflict degree, ties by ascending id.
std::vector<int> ld_order(const ConflictMatrix& cm);

/// Survivor indices into a fitness-sorted pool of `pool_size` entries,
/// keeping `target` of them: dense near the best, sparse toward the tail.
struct SurvivorSelection {
    std::vector<long> mapped;  // floor-scaled exponential map, may repeat
    std::vector<int> indices;  // deduplicated, strictly increasing
};
SurvivorSelection select_survivors_detail(int pool_size, int target, double rho);
std::vector<int> select_survivors(int pool_size, int target, double rho);

/// Positional pattern over solution vectors; wildcard positions accept any
/// value.
struct TabuPattern {
    static constexpr int kWildcard = std::numeric_limits<int>::min();
    std::vector<int> slots;

    int wildcards() const;
};

/// Positional intersection of the newest `depth + 1` best solutions:
/// positions where all agree keep their value, the rest become wildcards.
/// history[0] is the current best, history[k] the k-th previous best.
TabuPattern tabu_intersect(std::span<const std::vector<int>> history, int depth);

/// True iff `solution` matches every non-wildcard position of `pattern`.
bool is_tabu(const std::vector<int>& solution, const TabuPattern& pattern);

/// Feasible pool frozen after one increment.
struct IncrementSnapshot {
    int increment = 0; // 1-based
    std::vector<ConstraintId> batch;
    std::vector<std::vector<ConstraintAssignment>> solutions;
};

void write_snapshot(const IncrementSnapshot& snap, const std::filesystem::path& path);
IncrementSnapshot read_snapshot(const std::filesystem::path& path);

struct IncrementStats {
    int increment = 0;
    long generations = 0;   // generations spent inside this increment
    long migrations = 0;    // chromosomes that reached increment feasibility
    long first_feasible_generation = -1;
};

struct RunResult {
    bool success = false; // a complete hard-feasible solution was reached
    std::vector<ConstraintAssignment> best_genes;
    CostKey best_cost;
    double best_cost_display = 0; // proximity cost (timetabling) or m - |best|
    long generations = 0;
    double wall_seconds = 0;
    std::vector<std::pair<long, double>> cost_trace; // improvements: (generation, display cost)
    std::vector<IncrementStats> increments;
    std::vector<IncrementSnapshot> snapshots;
    PreferenceHistogram histogram; // gap histogram of the best timetable, when total
    bool has_histogram = false;
};

class Engine {
public:
    Engine(const ProblemAdapter& problem, const EngineConfig& config);
    Engine(const ProblemAdapter& problem, const EngineConfig& config, IncrementPlan plan);

    /// Full incremental run.
    RunResult run();

    /// Run starting from `start_increment` (0-based batch index) with the
    /// given chromosomes joining the initial pool.
    RunResult run_seeded(std::vector<Chromosome> seed_pool, int start_increment);

private:
    struct ParentSelection;

    void start_increment(int index);
    void csp_generation();
    bool optimization_generation();
    void migrate_feasible();
    bool refresh_best();
    void apply_tabu_regions();
    void revert_stagnant();
    Chromosome mutate_timetable(const Chromosome& c, OperatorKind op, Rng& rng);
    CostKey cop_cost(const Chromosome& c) const;
    double display_cost(const Chromosome& c) const;
    std::optional<Chromosome> fresh_feasible();
    std::vector<int> solution_vector(const Chromosome& c) const;
    bool budget_exhausted() const;
    RunResult finish(bool success);

    const ProblemAdapter& problem_;
    const TimetablingAdapter* timetabling_; // non-null when optimizing timetables
    EngineConfig config_;
    IncrementPlan plan_;
    Rng rng_;

    Population pop_;
    std::vector<ConstraintId> active_;
    int increment_ = 0;
    long generation_ = 0;
    long increment_generations_ = 0;
    long opt_generations_ = 0; // optimization generations since increment feasibility
    long first_feasible_gen_ = -1;
    long migrations_this_increment_ = 0;

    Chromosome best_;
    bool have_best_ = false;
    long stall_ = 0;
    std::vector<std::vector<int>> best_history_; // newest first, bounded by t
    OperatorSequencer sequencer_;

    std::vector<IncrementStats> increment_stats_;
    std::vector<IncrementSnapshot> snapshots_;
    std::vector<std::pair<long, double>> trace_;
    std::chrono::steady_clock::time_point started_;
    long debug_reverts_ = 0;
};

/// Outcome of replaying stored partial solutions against added constraints.
struct WhatIfOutcome {
    bool resolved = false;
    int snapshot_used = -1; // increment index of the snapshot that succeeded
    RunResult result;
    /// Unsolved constraint combinations, newest attempt first.
    std::vector<std::string> unresolved;
};

/// Tries the newest snapshot first: reruns the engine over the snapshot's
/// constraints plus `added` for a bounded number of generations, stepping
/// back one snapshot on failure. The strength comparison (largest conflict
/// degree) decides whether the report lists the added constraints or the
/// snapshot's weakest ones.
WhatIfOutcome whatif_add(const TimetablingAdapter& problem,
                         std::span<const IncrementSnapshot> snapshots,
                         std::span<const ConstraintId> added, const EngineConfig& config,
                         long generations_per_snapshot = 400);

} // namespace ichea
