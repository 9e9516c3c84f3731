#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ichea {

using Rng = std::mt19937_64;

/// 1-based index identifying one constraint of a problem (N-Queen: a column,
/// timetabling: an exam).
using ConstraintId = int;

/// One satisfied constraint together with its concrete discrete value
/// (N-Queen: the row of the queen, timetabling: the timeslot of the exam).
struct ConstraintAssignment {
    ConstraintId constraint = 0;
    int value = 0;

    friend bool operator==(const ConstraintAssignment&, const ConstraintAssignment&) = default;
};

/// Cost of a candidate during the optimization phase, compared
/// lexicographically (smaller is better). Weighted mode uses a single
/// component (the proximity-cost numerator); generic mode uses the
/// severity-ordered violation counts.
struct CostKey {
    std::vector<std::int64_t> parts;

    friend auto operator<=>(const CostKey& a, const CostKey& b) {
        return a.parts <=> b.parts;
    }
    friend bool operator==(const CostKey&, const CostKey&) = default;
};

/// Snapshot of a chromosome's solution state, kept on the per-individual
/// history stack so a stagnant individual can be reverted.
struct ChromosomeSnapshot {
    std::vector<ConstraintAssignment> genes;
    CostKey cost;
};

struct RchcTabuEntry {
    CostKey cost;
    std::uint64_t digest = 0;

    friend bool operator==(const RchcTabuEntry&, const RchcTabuEntry&) = default;
};

/// Default capacity of the per-individual tabu queue. The reference
/// parameter table leaves this unspecified; 10 entries give useful memory
/// without freezing equal-cost plateaus.
inline constexpr std::size_t kRchcTabuCapacity = 10;

/// Per-individual local-search memory: a bounded stack of previous states,
/// a bounded tabu queue, and a stagnation counter. Full containers evict
/// their oldest entry on insertion.
struct RchcState {
    std::vector<ChromosomeSnapshot> history;
    std::deque<RchcTabuEntry> tabu;
    int stagnation = 0;

    void push_history(ChromosomeSnapshot snap, std::size_t capacity) {
        if (history.size() >= capacity && !history.empty())
            history.erase(history.begin());
        history.push_back(std::move(snap));
    }
    void push_tabu(RchcTabuEntry entry, std::size_t capacity = kRchcTabuCapacity) {
        if (tabu.size() >= capacity && !tabu.empty())
            tabu.pop_front();
        tabu.push_back(std::move(entry));
    }
    bool is_tabu_state(const RchcTabuEntry& candidate, bool cost_only) const {
        for (const auto& e : tabu) {
            if (cost_only ? e.cost == candidate.cost : e == candidate)
                return true;
        }
        return false;
    }
};

/// A variable-length feasible partial solution: an ordered list of
/// pairwise-compatible constraint assignments. Gene order records insertion
/// order; feasibility and digests are order-insensitive.
struct Chromosome {
    std::vector<ConstraintAssignment> genes;
    CostKey cost;             // optimization-phase cost, empty until evaluated
    RchcState rchc;
    long last_improved = 0;   // generation of the last fitness improvement
    bool tabu_marked = false; // matched the active tabu region pattern

    int length() const { return static_cast<int>(genes.size()); }

    const ConstraintAssignment* find(ConstraintId c) const {
        for (const auto& g : genes)
            if (g.constraint == c) return &g;
        return nullptr;
    }
};

/// Order-insensitive 64-bit digest of a gene set. Equal (constraint, value)
/// sets yield equal digests regardless of gene order.
std::uint64_t digest(const Chromosome& c);
std::uint64_t digest(std::span<const ConstraintAssignment> genes);

/// Community: one feasible anchor influencing a bounded group of infeasible
/// neighbours. Members stay in their community while infeasible.
struct Community {
    int anchor = -1;              // index into the feasible pool
    std::vector<int> members;     // indices into the infeasible pool
};

struct Population {
    std::vector<Chromosome> csp_pool; // infeasible for the current increment
    std::vector<Chromosome> cop_pool; // feasible for the current increment
    std::vector<Community> communities;

    int size() const { return static_cast<int>(csp_pool.size() + cop_pool.size()); }
};

enum class EngineMode { Ichea, Iichea };
enum class FitnessMode { Weighted, Generic };

struct Budget {
    double max_seconds = 0;     // 0 = unlimited
    long max_generations = 0;   // 0 = unlimited
    // Stop as soon as the weighted cost numerator divided by the student
    // count reaches this value (<= 0 disables the early exit).
    double target_cost = -1;
};

/// All run parameters. Defaults follow the reference parameter table.
struct EngineConfig {
    int population_size = 100;
    int optimize_generations = 50; // G; forced to 0 in Ichea mode
    int degree_of_influence = 3;
    int community_size = 4;
    int total_communities = 10;
    int stagnant_generations = 5;  // s: operator rotation threshold
    int clone_constant = 1;        // alpha (the table's beta); clone budget factor
    int history_depth = 3;         // H: per-individual revert stack
    int backtrack_stagnation = 5;  // delta: generations before a revert
    int tabu_history = 5;          // t: ring of previous best solutions
    double increment_fraction = 0.05; // r
    double selection_rho = 5.0;       // rho in survivor selection
    std::uint64_t seed = 1;
    EngineMode mode = EngineMode::Iichea;
    FitnessMode fitness_mode = FitnessMode::Weighted;
    bool rchc_tabu_cost_only = false; // strict mode: tabu matches on cost alone
    Budget budget;

    void validate() const;
    /// Applies the mode coupling (Ichea => G = 0) and checks invariants.
    EngineConfig normalized() const;
};

/// Contract every concrete problem implements. `compatible` must be
/// deterministic and depend only on the receiver's gene set, not gene order.
class ProblemAdapter {
public:
    virtual ~ProblemAdapter() = default;

    virtual int constraint_count() const = 0;
    virtual std::vector<int> domain(ConstraintId constraint) const = 0;
    virtual bool compatible(const ConstraintAssignment& a, const Chromosome& c) const = 0;
    /// Preference rank used to order constraints into increments
    /// (largest-degree for timetabling). Higher = scheduled earlier.
    virtual int strength(ConstraintId constraint) const = 0;

    /// Key used for duplicate detection during fusion. N-Queens keys on the
    /// allele value, the default keys on the constraint id. Must lie in
    /// [0, fusion_domain_size()).
    virtual int fusion_key(const ConstraintAssignment& g) const {
        return g.constraint - 1;
    }
    virtual int fusion_domain_size() const { return constraint_count(); }
    /// Rewrites a donor gene before appending it to `receiver`. N-Queens
    /// relocates the value to the receiver's next column.
    virtual ConstraintAssignment adapt_for_append(const ConstraintAssignment& g,
                                                  const Chromosome& receiver) const {
        (void)receiver;
        return g;
    }

    /// Fresh random chromosome covering the given constraints: each gets a
    /// uniform random domain value; incompatible genes are dropped at
    /// creation so the feasible-partial invariant holds.
    virtual Chromosome random_chromosome(std::span<const ConstraintId> batch, Rng& rng) const;

    /// Candidate gene extending `c` by one constraint from `active`, or
    /// nothing when `c` already covers all of them. The candidate is not
    /// guaranteed compatible; callers must check.
    virtual std::optional<ConstraintAssignment>
    propose_extension(const Chromosome& c, std::span<const ConstraintId> active, Rng& rng) const;

    /// True when the problem carries soft constraints worth optimizing.
    virtual bool has_soft_cost() const { return false; }
};

/// Every gene's value lies in its domain and the whole gene set is pairwise
/// compatible under the adapter.
bool is_feasible_partial(const Chromosome& c, const ProblemAdapter& problem);

inline void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

} // namespace ichea
