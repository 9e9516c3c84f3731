#include "ichea/core.hpp"

namespace ichea {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t digest(std::span<const ConstraintAssignment> genes) {
    // Commutative accumulation keeps the digest order-insensitive; gene sets
    // never repeat a constraint, so summation is collision-safe in practice.
    std::uint64_t acc = 0x0ddba11c0ffee123ULL;
    for (const auto& g : genes) {
        std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(g.constraint)) << 32) |
                            static_cast<std::uint32_t>(g.value);
        acc += splitmix64(key);
    }
    return acc;
}

std::uint64_t digest(const Chromosome& c) { return digest(std::span(c.genes)); }

void EngineConfig::validate() const {
    require(population_size > 1, "population_size must exceed 1");
    require(optimize_generations >= 0, "optimize_generations must be non-negative");
    require(degree_of_influence > 0, "degree_of_influence must be positive");
    require(community_size > 0, "community_size must be positive");
    require(total_communities > 0, "total_communities must be positive");
    require(stagnant_generations > 0, "stagnant_generations must be positive");
    require(clone_constant > 0, "clone_constant must be positive");
    require(history_depth >= 0, "history_depth must be non-negative");
    require(backtrack_stagnation > 0, "backtrack_stagnation must be positive");
    require(tabu_history > 0, "tabu_history must be positive");
    require(increment_fraction > 0.0 && increment_fraction <= 1.0,
            "increment_fraction must lie in (0, 1]");
    require(selection_rho > 0.0, "selection_rho must be positive");
    if (mode == EngineMode::Ichea)
        require(optimize_generations == 0, "ichea mode requires optimize_generations = 0");
}

EngineConfig EngineConfig::normalized() const {
    EngineConfig c = *this;
    if (c.mode == EngineMode::Ichea) c.optimize_generations = 0;
    c.validate();
    return c;
}

Chromosome ProblemAdapter::random_chromosome(std::span<const ConstraintId> batch, Rng& rng) const {
    Chromosome c;
    c.genes.reserve(batch.size());
    for (ConstraintId id : batch) {
        auto values = domain(id);
        if (values.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
        ConstraintAssignment g{id, values[pick(rng)]};
        if (compatible(g, c)) c.genes.push_back(g);
    }
    return c;
}

std::optional<ConstraintAssignment>
ProblemAdapter::propose_extension(const Chromosome& c, std::span<const ConstraintId> active,
                                  Rng& rng) const {
    std::vector<ConstraintId> missing;
    for (ConstraintId id : active)
        if (c.find(id) == nullptr) missing.push_back(id);
    if (missing.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, missing.size() - 1);
    const ConstraintId id = missing[pick(rng)];
    std::vector<int> usable;
    for (int v : domain(id))
        if (compatible({id, v}, c)) usable.push_back(v);
    if (usable.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick_value(0, usable.size() - 1);
    return ConstraintAssignment{id, usable[pick_value(rng)]};
}

bool is_feasible_partial(const Chromosome& c, const ProblemAdapter& problem) {
    Chromosome partial;
    partial.genes.reserve(c.genes.size());
    for (const auto& g : c.genes) {
        bool in_domain = false;
        for (int v : problem.domain(g.constraint)) {
            if (v == g.value) {
                in_domain = true;
                break;
            }
        }
        if (!in_domain) return false;
        if (partial.find(g.constraint) != nullptr) return false;
        if (!problem.compatible(g, partial)) return false;
        partial.genes.push_back(g);
    }
    return true;
}

} // namespace ichea
