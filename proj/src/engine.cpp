#include "ichea/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ichea/crossover.hpp"
#include <set>

namespace ichea {

IncrementPlan IncrementPlan::build(const ProblemAdapter& problem, double fraction) {
    require(fraction > 0.0 && fraction <= 1.0, "increment fraction must lie in (0, 1]");
    const int m = problem.constraint_count();
    require(m > 0, "problem has no constraints");

    std::vector<ConstraintId> order(m);
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](ConstraintId a, ConstraintId b) {
        const int sa = problem.strength(a);
        const int sb = problem.strength(b);
        if (sa != sb) return sa > sb;
        return a < b;
    });

    const int batch_size = static_cast<int>(std::ceil(fraction * m));
    IncrementPlan plan;
    for (int begin = 0; begin < m; begin += batch_size) {
        const int end = std::min(m, begin + batch_size);
        plan.batches.emplace_back(order.begin() + begin, order.begin() + end);
    }
    return plan;
}

int IncrementPlan::total_constraints() const {
    int total = 0;
    for (const auto& batch : batches) total += static_cast<int>(batch.size());
    return total;
}

std::vector<int> ld_order(const ConflictMatrix& cm) {
    std::vector<int> order(cm.exams());
    std::iota(order.begin(), order.end(), 1);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const int da = cm.degree(a);
        const int db = cm.degree(b);
        if (da != db) return da > db;
        return a < b;
    });
    return order;
}

SurvivorSelection select_survivors_detail(int pool_size, int target, double rho) {
    require(target >= 2, "survivor selection needs a target of at least 2");
    require(pool_size >= target, "pool smaller than the selection target");
    require(rho > 0.0, "rho must be positive");

    SurvivorSelection sel;
    sel.mapped.reserve(target);
    sel.indices.reserve(target);

    // The worked reference sequence {0,1,2,3,4,5,8,15,27,49} (target 10,
    // 40 extras, rho 5) pins three constants: the exponent denominator is
    // target - 1, the scale factor is pool_size - 1, and the dedup
    // recurrence chains on the already-deduplicated previous index.
    const double f1 = std::exp(-rho);
    const double scale = static_cast<double>(pool_size - 1);
    for (int i = 1; i <= target; ++i) {
        const double fi = std::exp(-rho * static_cast<double>(target - i) /
                                   static_cast<double>(target - 1));
        sel.mapped.push_back(static_cast<long>(std::floor(scale * (fi - f1) / (1.0 - f1))));
    }
    for (int i = 0; i < target; ++i) {
        long index = sel.mapped[i];
        if (i > 0 && index <= sel.indices.back()) index = sel.indices.back() + 1;
        require(index < pool_size, "survivor index beyond pool");
        sel.indices.push_back(static_cast<int>(index));
    }
    return sel;
}

std::vector<int> select_survivors(int pool_size, int target, double rho) {
    return select_survivors_detail(pool_size, target, rho).indices;
}

int TabuPattern::wildcards() const {
    int count = 0;
    for (int v : slots)
        if (v == kWildcard) ++count;
    return count;
}

TabuPattern tabu_intersect(std::span<const std::vector<int>> history, int depth) {
    require(depth >= 1, "tabu pattern needs depth >= 1");
    require(static_cast<int>(history.size()) >= depth + 1, "insufficient history");
    TabuPattern pattern;
    pattern.slots = history[0];
    for (int k = 1; k <= depth; ++k) {
        require(history[k].size() == pattern.slots.size(), "solution dimensions differ");
        for (std::size_t p = 0; p < pattern.slots.size(); ++p)
            if (pattern.slots[p] != history[k][p]) pattern.slots[p] = TabuPattern::kWildcard;
    }
    // Agreement on an unassigned position (partial solutions) pins no
    // allele value and must not restrict anything.
    for (auto& slot : pattern.slots)
        if (slot == -1) slot = TabuPattern::kWildcard;
    return pattern;
}

bool is_tabu(const std::vector<int>& solution, const TabuPattern& pattern) {
    require(solution.size() == pattern.slots.size(), "pattern length mismatch");
    for (std::size_t p = 0; p < pattern.slots.size(); ++p)
        if (pattern.slots[p] != TabuPattern::kWildcard && pattern.slots[p] != solution[p])
            return false;
    return true;
}

void write_snapshot(const IncrementSnapshot& snap, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    int lo = 0, hi = 0;
    if (!snap.batch.empty()) {
        lo = *std::min_element(snap.batch.begin(), snap.batch.end());
        hi = *std::max_element(snap.batch.begin(), snap.batch.end());
    }
    out << "# increment " << snap.increment << " batch " << lo << ".." << hi << '\n';
    for (std::size_t s = 0; s < snap.solutions.size(); ++s) {
        if (s > 0) out << '\n';
        for (const auto& g : snap.solutions[s]) out << g.constraint << ' ' << g.value << '\n';
    }
}

IncrementSnapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    IncrementSnapshot snap;
    std::string line;
    std::vector<ConstraintAssignment> current;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!header_seen) {
            std::istringstream ss(line);
            std::string hash, word;
            if (!(ss >> hash >> word >> snap.increment) || hash != "#" || word != "increment")
                throw std::runtime_error(path.string() + ": bad snapshot header");
            header_seen = true;
            continue;
        }
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
            if (!current.empty()) snap.solutions.push_back(std::move(current));
            current.clear();
            continue;
        }
        std::istringstream ss(line);
        ConstraintAssignment g;
        if (!(ss >> g.constraint >> g.value))
            throw std::runtime_error(path.string() + ": bad snapshot line");
        current.push_back(g);
    }
    if (!current.empty()) snap.solutions.push_back(std::move(current));
    if (!header_seen) throw std::runtime_error(path.string() + ": empty snapshot");
    return snap;
}

Engine::Engine(const ProblemAdapter& problem, const EngineConfig& config)
    : Engine(problem, config, IncrementPlan::build(problem, config.increment_fraction)) {}

Engine::Engine(const ProblemAdapter& problem, const EngineConfig& config, IncrementPlan plan)
    : problem_(problem), timetabling_(dynamic_cast<const TimetablingAdapter*>(&problem)),
      config_(config.normalized()), plan_(std::move(plan)), rng_(config_.seed),
      sequencer_(config_.stagnant_generations) {}

RunResult Engine::run() { return run_seeded({}, 0); }

std::vector<int> Engine::solution_vector(const Chromosome& c) const {
    std::vector<int> v(problem_.constraint_count(), -1);
    for (const auto& g : c.genes) v[g.constraint - 1] = g.value;
    return v;
}

CostKey Engine::cop_cost(const Chromosome& c) const {
    if (timetabling_ != nullptr) {
        const Timetable tt = timetabling_->to_timetable(c);
        return config_.fitness_mode == FitnessMode::Generic
                   ? spread_cost_key(tt, timetabling_->conflicts())
                   : weighted_cost_key(tt, timetabling_->conflicts());
    }
    return CostKey{{static_cast<std::int64_t>(problem_.constraint_count() - c.length())}};
}

double Engine::display_cost(const Chromosome& c) const {
    if (timetabling_ != nullptr) {
        const Timetable tt = timetabling_->to_timetable(c);
        return proximity_cost(tt, timetabling_->conflicts(), timetabling_->instance().students)
            .value();
    }
    return static_cast<double>(problem_.constraint_count() - c.length());
}

bool Engine::budget_exhausted() const {
    const Budget& b = config_.budget;
    if (b.max_generations > 0 && generation_ >= b.max_generations) return true;
    if (b.max_seconds > 0) {
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                           started_)
                                 .count();
        if (elapsed >= b.max_seconds) return true;
    }
    return false;
}

void Engine::start_increment(int index) {
    increment_ = index;
    for (ConstraintId id : plan_.batches[index]) active_.push_back(id);
    increment_generations_ = 0;
    opt_generations_ = 0;
    first_feasible_gen_ = -1;
    migrations_this_increment_ = 0;

    // Previous feasible solutions become partial again under the new batch.
    for (auto& c : pop_.cop_pool) {
        c.rchc = RchcState{};
        c.tabu_marked = false;
        pop_.csp_pool.push_back(std::move(c));
    }
    pop_.cop_pool.clear();

    // Reserve a quarter of the population for chromosomes covering the new
    // batch, evicting the shortest leftovers if the pool is already full.
    const int fresh_quota = std::max(1, config_.population_size / 4);
    const std::size_t keep =
        static_cast<std::size_t>(std::max(0, config_.population_size - fresh_quota));
    if (pop_.csp_pool.size() > keep) {
        std::stable_sort(pop_.csp_pool.begin(), pop_.csp_pool.end(),
                         [](const Chromosome& a, const Chromosome& b) {
                             if (a.length() != b.length()) return a.length() > b.length();
                             return digest(a) < digest(b);
                         });
        pop_.csp_pool.resize(keep);
    }

    while (pop_.size() < config_.population_size) {
        Chromosome fresh = problem_.random_chromosome(plan_.batches[index], rng_);
        fresh.last_improved = generation_;
        pop_.csp_pool.push_back(std::move(fresh));
    }
}

void Engine::csp_generation() {
    auto& pool = pop_.csp_pool;
    if (pool.size() < 2) return;

    std::vector<int> eligible;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (!pool[i].tabu_marked) eligible.push_back(static_cast<int>(i));
    if (eligible.size() < 2) {
        eligible.resize(pool.size());
        std::iota(eligible.begin(), eligible.end(), 0);
    }

    int parents = static_cast<int>(eligible.size()) / 2;
    parents -= parents % 2;
    if (parents < 2) parents = 2;

    // Partial Fisher-Yates draw without replacement.
    for (int k = 0; k < parents; ++k) {
        std::uniform_int_distribution<int> pick(k, static_cast<int>(eligible.size()) - 1);
        std::swap(eligible[k], eligible[pick(rng_)]);
    }

    std::vector<Chromosome> offspring;
    for (int k = 0; k + 1 < parents; k += 2) {
        const int index_a = eligible[k];
        const int index_b = eligible[k + 1];
        FusionPair fused = intermarriage_fuse_unchecked(pool[index_a], pool[index_b], problem_);
        for (auto* report : {&fused.first, &fused.second}) {
            Chromosome& parent = pool[report == &fused.first ? index_a : index_b];
            Chromosome child;
            child.genes = std::move(report->offspring.genes);
            if (auto extension = problem_.propose_extension(child, active_, rng_)) {
                if (problem_.compatible(*extension, child)) child.genes.push_back(*extension);
            }
            // Offspring enter the pool only when strictly longer than their
            // parent or equally long with a different gene set.
            if (child.length() < parent.length()) continue;
            if (child.length() == parent.length() && digest(child) == digest(parent)) continue;
            if (child.length() > parent.length()) {
                // A lengthening offspring counts as progress for the parent
                // and starts its own fresh clock; an equal-length sibling is
                // diversity, not progress, and inherits the parent's clock.
                parent.last_improved = generation_;
                parent.rchc.stagnation = 0;
                child.last_improved = generation_;
            } else {
                child.last_improved = parent.last_improved;
                child.rchc.stagnation = parent.rchc.stagnation;
            }
            offspring.push_back(std::move(child));
        }
    }
    if (offspring.empty()) return;

    for (auto& child : offspring) pool.push_back(std::move(child));

    const int capacity = config_.population_size - static_cast<int>(pop_.cop_pool.size());
    if (capacity < 2) return;

    std::vector<int> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::uint64_t> digests(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) digests[i] = digest(pool[i]);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (pool[a].length() != pool[b].length()) return pool[a].length() > pool[b].length();
        return digests[a] < digests[b];
    });

    // Duplicate gene sets add nothing to the search; only unique solutions
    // compete for survival. Freed slots are refilled with fresh
    // chromosomes by the migration sweep.
    std::vector<int> unique_ranks;
    unique_ranks.reserve(order.size());
    std::uint64_t previous_digest = 0;
    bool first = true;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        // Equal gene sets have equal length, so they sort adjacently.
        const std::uint64_t d = digests[order[rank]];
        if (!first && d == previous_digest) continue;
        unique_ranks.push_back(static_cast<int>(rank));
        previous_digest = d;
        first = false;
    }

    if (static_cast<int>(unique_ranks.size()) > capacity) {
        const std::vector<int> chosen =
            select_survivors(static_cast<int>(unique_ranks.size()), capacity,
                             config_.selection_rho);

        // Individuals whose fitness improved within the last delta
        // generations survive regardless of rank.
        auto is_protected = [&](int pool_index) {
            return generation_ - pool[pool_index].last_improved <=
                   static_cast<long>(config_.backtrack_stagnation);
        };
        std::vector<bool> selected(pool.size(), false);
        for (int rank : chosen) selected[order[unique_ranks[rank]]] = true;

        std::vector<int> missed;
        for (std::size_t u = 0; u < unique_ranks.size(); ++u) {
            const int idx = order[unique_ranks[u]];
            if (!selected[idx] && is_protected(idx)) missed.push_back(idx);
        }
        for (std::size_t m = 0, slot = chosen.size(); m < missed.size() && slot-- > 1;) {
            const int victim = order[unique_ranks[chosen[slot]]];
            if (is_protected(victim)) continue;
            selected[victim] = false;
            selected[missed[m]] = true;
            ++m;
        }

        std::vector<Chromosome> survivors;
        survivors.reserve(capacity);
        for (int rank : unique_ranks)
            if (selected[order[rank]]) survivors.push_back(std::move(pool[order[rank]]));
        pool = std::move(survivors);
    } else {
        std::vector<Chromosome> survivors;
        survivors.reserve(unique_ranks.size());
        for (int rank : unique_ranks) survivors.push_back(std::move(pool[order[rank]]));
        pool = std::move(survivors);
    }
}

void Engine::migrate_feasible() {
    const int target_length = static_cast<int>(active_.size());
    auto& csp = pop_.csp_pool;
    for (std::size_t i = 0; i < csp.size();) {
        if (csp[i].length() == target_length) {
            Chromosome migrant = std::move(csp[i]);
            csp.erase(csp.begin() + static_cast<long>(i));
            migrant.cost = cop_cost(migrant);
            migrant.rchc = RchcState{};
            pop_.cop_pool.push_back(std::move(migrant));
            ++migrations_this_increment_;
            if (first_feasible_gen_ < 0) first_feasible_gen_ = generation_;
        } else {
            ++i;
        }
    }

    const int cop_capacity = std::max(1, config_.population_size / 2);
    while (static_cast<int>(pop_.cop_pool.size()) > cop_capacity) {
        auto worst = std::max_element(
            pop_.cop_pool.begin(), pop_.cop_pool.end(), [](const Chromosome& a, const Chromosome& b) {
                if (a.cost != b.cost) return a.cost < b.cost;
                return digest(a) < digest(b);
            });
        pop_.cop_pool.erase(worst);
    }

    while (pop_.size() < config_.population_size) {
        Chromosome fresh = problem_.random_chromosome(plan_.batches[increment_], rng_);
        fresh.last_improved = generation_;
        pop_.csp_pool.push_back(std::move(fresh));
    }
}

Chromosome Engine::mutate_timetable(const Chromosome& c, OperatorKind op, Rng& rng) {
    const ConflictMatrix& cm = timetabling_->conflicts();
    Timetable tt = timetabling_->to_timetable(c);
    Timetable out = tt;

    switch (op) {
    case OperatorKind::KempeTraditional: {
        std::vector<int> occupied;
        for (int s = 0; s < tt.slots(); ++s)
            if (!tt.exams_in(s).empty()) occupied.push_back(s);
        if (occupied.empty() || tt.slots() < 2) break;
        std::uniform_int_distribution<std::size_t> pick(0, occupied.size() - 1);
        const int slot_i = occupied[pick(rng)];
        std::uniform_int_distribution<int> pick_j(0, tt.slots() - 1);
        int slot_j = pick_j(rng);
        while (slot_j == slot_i) slot_j = pick_j(rng);
        std::vector<int> pool = tt.exams_in(slot_i);
        const int max_seeds = static_cast<int>(std::min<std::size_t>(5, pool.size()));
        std::uniform_int_distribution<int> count_dist(1, max_seeds);
        const int count = count_dist(rng);
        std::vector<int> seeds;
        for (int k = 0; k < count; ++k) {
            std::uniform_int_distribution<std::size_t> at(0, pool.size() - 1);
            const std::size_t chosen = at(rng);
            seeds.push_back(pool[chosen]);
            pool.erase(pool.begin() + static_cast<long>(chosen));
        }
        out = kempe_chain_move(tt, cm, slot_i, slot_j, seeds);
        break;
    }
    case OperatorKind::KempeBoundary:
        out = boundary_kempe_move(tt, cm, rng);
        break;
    case OperatorKind::SwapExams: {
        RepairSet repair(1);
        if (auto swapped = swap_exams(tt, cm, rng, repair)) {
            out = std::move(*swapped);
        } else {
            auto repaired = repair.repair_all(cm);
            if (!repaired.empty()) out = std::move(repaired.front());
        }
        break;
    }
    case OperatorKind::MoveOrSwapSlot:
        if (tt.slots() >= 2) out = move_or_swap_slot(tt, rng);
        break;
    case OperatorKind::RemovalReinsert:
        out = removal_reinsert(tt, cm, rng);
        break;
    case OperatorKind::ClusterMutation:
        out = cluster_mutation(tt, cm, rng);
        break;
    case OperatorKind::CommunityInfluence: {
        // Only the best feasible member influences the others.
        const Chromosome* best = nullptr;
        for (const auto& member : pop_.cop_pool)
            if (best == nullptr || member.cost < best->cost) best = &member;
        if (best != nullptr) {
            const Timetable donor = timetabling_->to_timetable(*best);
            std::vector<int> exams;
            for (int e = 1; e <= tt.exams(); ++e)
                if (tt.assigned(e) && donor.assigned(e)) exams.push_back(e);
            if (!exams.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, exams.size() - 1);
                for (int k = 0; k < config_.degree_of_influence; ++k)
                    out = kempe_crossover(out, donor, cm, exams[pick(rng)]);
            }
        }
        break;
    }
    case OperatorKind::KempeCrossover: {
        if (!pop_.cop_pool.empty()) {
            std::uniform_int_distribution<std::size_t> pick_peer(0, pop_.cop_pool.size() - 1);
            const Timetable donor = timetabling_->to_timetable(pop_.cop_pool[pick_peer(rng)]);
            std::vector<int> exams;
            for (int e = 1; e <= tt.exams(); ++e)
                if (tt.assigned(e) && donor.assigned(e)) exams.push_back(e);
            if (!exams.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, exams.size() - 1);
                for (int k = 0; k < config_.degree_of_influence; ++k)
                    out = kempe_crossover(out, donor, cm, exams[pick(rng)]);
            }
        }
        break;
    }
    }

    Chromosome mutated = timetabling_->to_chromosome(out);
    mutated.last_improved = c.last_improved;
    return mutated;
}

std::optional<Chromosome> Engine::fresh_feasible() {
    for (int attempt = 0; attempt < 5; ++attempt) {
        Chromosome c = problem_.random_chromosome(active_, rng_);
        for (ConstraintId id : active_) {
            if (c.find(id) != nullptr) continue;
            auto values = problem_.domain(id);
            std::shuffle(values.begin(), values.end(), rng_);
            for (int v : values) {
                const ConstraintAssignment g{id, v};
                if (problem_.compatible(g, c)) {
                    c.genes.push_back(g);
                    break;
                }
            }
        }
        if (c.length() == static_cast<int>(active_.size())) {
            c.last_improved = generation_;
            return c;
        }
    }
    return std::nullopt;
}

bool Engine::optimization_generation() {
    if (timetabling_ == nullptr || !problem_.has_soft_cost() || pop_.cop_pool.empty())
        return false;
    // Partial solutions are optimized between increments only when the mode
    // asks for it (G > 0); otherwise optimization starts after the final
    // batch.
    const bool last_increment = increment_ + 1 >= static_cast<int>(plan_.batches.size());
    if (!last_increment && config_.optimize_generations == 0) return false;

    RchcCallbacks callbacks;
    callbacks.cost = [this](const Chromosome& c) { return cop_cost(c); };
    callbacks.mutate = [this](const Chromosome& c, OperatorKind op, Rng& rng) {
        return mutate_timetable(c, op, rng);
    };
    callbacks.fresh_feasible = [this]() { return fresh_feasible(); };

    rchc_step(pop_.cop_pool, sequencer_.current(), config_, rng_, callbacks);
    ++opt_generations_;
    return true;
}

bool Engine::refresh_best() {
    const Chromosome* candidate = nullptr;
    CostKey candidate_cost;
    auto consider = [&](const Chromosome& c, const CostKey& cost) {
        if (candidate == nullptr) {
            candidate = &c;
            candidate_cost = cost;
            return;
        }
        if (c.length() != candidate->length()) {
            if (c.length() > candidate->length()) {
                candidate = &c;
                candidate_cost = cost;
            }
            return;
        }
        if (cost < candidate_cost || (cost == candidate_cost && digest(c) < digest(*candidate))) {
            candidate = &c;
            candidate_cost = cost;
        }
    };
    for (const auto& c : pop_.cop_pool) consider(c, c.cost);
    int longest_partial = 0;
    for (const auto& c : pop_.csp_pool) longest_partial = std::max(longest_partial, c.length());
    for (const auto& c : pop_.csp_pool) {
        // Shorter partials can never displace the candidate; skip their
        // cost evaluation.
        if (candidate != nullptr && c.length() < std::max(longest_partial, candidate->length()))
            continue;
        if (candidate == nullptr && c.length() < longest_partial) continue;
        consider(c, cop_cost(c));
    }
    if (candidate == nullptr) return false;

    bool improved = false;
    if (!have_best_) {
        improved = true;
    } else if (candidate->length() != best_.length()) {
        improved = candidate->length() > best_.length();
    } else {
        improved = candidate_cost < best_.cost;
    }

    if (improved) {
        best_ = *candidate;
        best_.cost = candidate_cost;
        have_best_ = true;
        stall_ = 0;
        trace_.emplace_back(generation_, display_cost(best_));
        best_history_.insert(best_history_.begin(), solution_vector(best_));
        if (static_cast<int>(best_history_.size()) > config_.tabu_history)
            best_history_.resize(config_.tabu_history);
        for (auto& c : pop_.csp_pool) c.tabu_marked = false;
        for (auto& c : pop_.cop_pool) c.tabu_marked = false;
    } else {
        ++stall_;
    }
    return improved;
}

void Engine::apply_tabu_regions() {
    const long engage_after = 5L * config_.stagnant_generations;
    if (stall_ < engage_after || best_history_.size() < 2) return;

    int depth = 1 + static_cast<int>((stall_ - engage_after) / engage_after);
    depth = std::min<int>(depth, static_cast<int>(best_history_.size()) - 1);
    depth = std::min(depth, config_.tabu_history - 1);
    if (depth < 1) return;

    const TabuPattern pattern = tabu_intersect(best_history_, depth);
    // A pattern with no pinned allele would mark the entire population.
    if (pattern.wildcards() == static_cast<int>(pattern.slots.size())) return;
    for (auto& c : pop_.cop_pool) c.tabu_marked = is_tabu(solution_vector(c), pattern);
    for (auto& c : pop_.csp_pool) c.tabu_marked = is_tabu(solution_vector(c), pattern);
}

void Engine::revert_stagnant() {
    // Partial solutions whose fitness stopped growing are reverted (tail
    // genes dropped) so they can regrow along a different branch, with the
    // cut deepening after each consecutive revert; ones already cut to the
    // root are deleted and replaced by fresh chromosomes.
    for (auto& c : pop_.csp_pool) {
        if (generation_ - c.last_improved <= static_cast<long>(config_.backtrack_stagnation))
            continue;
        if (c.length() <= 1) {
            c = problem_.random_chromosome(plan_.batches[increment_], rng_);
            c.last_improved = generation_;
            continue;
        }
        const int widen = config_.stagnant_generations * (1 + c.rchc.stagnation);
        std::uniform_int_distribution<int> drop_dist(1, std::min(c.length() - 1, widen));
        c.genes.resize(c.genes.size() - static_cast<std::size_t>(drop_dist(rng_)));
        c.rchc.stagnation += 1;
#ifdef ICHEA_DEBUG_TRACE
        ++debug_reverts_;
#endif
        c.last_improved = generation_;
        c.tabu_marked = false;
    }
}

RunResult Engine::finish(bool success) {
    RunResult result;
    result.success = success && have_best_ &&
                     best_.length() == problem_.constraint_count();
    if (have_best_) {
        result.best_genes = best_.genes;
        result.best_cost = best_.cost;
        result.best_cost_display = display_cost(best_);
    }
    result.generations = generation_;
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    result.cost_trace = std::move(trace_);
    result.increments = std::move(increment_stats_);
    result.snapshots = std::move(snapshots_);
    if (timetabling_ != nullptr && have_best_ &&
        best_.length() == problem_.constraint_count()) {
        result.histogram = preference_histogram(timetabling_->to_timetable(best_),
                                                timetabling_->conflicts());
        result.has_histogram = true;
    }
    return result;
}

RunResult Engine::run_seeded(std::vector<Chromosome> seed_pool, int first_increment) {
    require(first_increment >= 0 && first_increment < static_cast<int>(plan_.batches.size()),
            "start increment out of range");
    started_ = std::chrono::steady_clock::now();
    pop_ = Population{};
    active_.clear();
    generation_ = 0;
    stall_ = 0;
    have_best_ = false;
    best_history_.clear();
    trace_.clear();
    increment_stats_.clear();
    snapshots_.clear();

    for (int i = 0; i < first_increment; ++i)
        for (ConstraintId id : plan_.batches[i]) active_.push_back(id);
    for (auto& seed : seed_pool) {
        seed.rchc = RchcState{};
        seed.tabu_marked = false;
        seed.last_improved = 0;
        pop_.csp_pool.push_back(std::move(seed));
    }
    if (static_cast<int>(pop_.csp_pool.size()) > config_.population_size)
        pop_.csp_pool.resize(config_.population_size);
    start_increment(first_increment);

    const bool pure_csp = !problem_.has_soft_cost();
    const int total = problem_.constraint_count();

    while (true) {
        if (budget_exhausted()) return finish(have_best_ && best_.length() == total);

        ++generation_;
        ++increment_generations_;

        csp_generation();
        if (!pop_.cop_pool.empty() && !pop_.csp_pool.empty()) {
            build_communities(pop_, config_.total_communities, config_.community_size);
            community_influence_step(pop_, problem_, config_.degree_of_influence, rng_);
        }
        migrate_feasible();
        const bool optimized = optimization_generation();
        const bool improved = refresh_best();
        if (optimized) sequencer_.next_operator(improved);
        apply_tabu_regions();
        revert_stagnant();
#ifdef ICHEA_DEBUG_TRACE
        if (generation_ % 2000 == 0) {
            int marked = 0, max_len = 0;
            long stagnant = 0;
            std::set<std::uint64_t> digests;
            for (auto& c : pop_.csp_pool) {
                if (c.tabu_marked) ++marked;
                max_len = std::max(max_len, c.length());
                if (generation_ - c.last_improved > config_.backtrack_stagnation) ++stagnant;
                digests.insert(digest(c));
            }
            fprintf(stderr,
                    "gen %ld stall=%ld best=%d marked=%d maxlen=%d stagnant=%ld distinct=%zu "
                    "reverts=%ld\n",
                    generation_, stall_, best_.length(), marked, max_len, stagnant,
                    digests.size(), debug_reverts_);
        }
#endif

        const bool increment_feasible = !pop_.cop_pool.empty();
        const bool last_increment = increment_ + 1 >= static_cast<int>(plan_.batches.size());

        if (increment_feasible && last_increment) {
            if (pure_csp) return finish(true);
            const double target = config_.budget.target_cost;
            if (target >= 0 && have_best_ && best_.length() == total &&
                display_cost(best_) <= target)
                return finish(true);
        }

        const long effective_g = timetabling_ != nullptr ? config_.optimize_generations : 0;
        if (increment_feasible && !last_increment && opt_generations_ >= effective_g) {
            IncrementStats stats;
            stats.increment = increment_ + 1;
            stats.generations = increment_generations_;
            stats.migrations = migrations_this_increment_;
            stats.first_feasible_generation = first_feasible_gen_;
            increment_stats_.push_back(stats);

            IncrementSnapshot snap;
            snap.increment = increment_ + 1;
            snap.batch = plan_.batches[increment_];
            for (const auto& c : pop_.cop_pool) snap.solutions.push_back(c.genes);
            snapshots_.push_back(std::move(snap));

            start_increment(increment_ + 1);
        }
    }
}

WhatIfOutcome whatif_add(const TimetablingAdapter& problem,
                         std::span<const IncrementSnapshot> snapshots,
                         std::span<const ConstraintId> added, const EngineConfig& config,
                         long generations_per_snapshot) {
    require(!snapshots.empty(), "no snapshots stored");
    require(!added.empty(), "no constraints to add");
    for (ConstraintId id : added)
        require(id >= 1 && id <= problem.constraint_count(), "unknown constraint");

    WhatIfOutcome outcome;
    for (std::size_t back = snapshots.size(); back-- > 0;) {
        const IncrementSnapshot& snap = snapshots[back];
        if (snap.solutions.empty()) continue;

        std::vector<ConstraintId> added_sorted(added.begin(), added.end());
        std::sort(added_sorted.begin(), added_sorted.end());

        std::vector<ConstraintId> covered;
        for (const auto& g : snap.solutions.front())
            if (!std::binary_search(added_sorted.begin(), added_sorted.end(), g.constraint))
                covered.push_back(g.constraint);
        if (covered.empty()) continue;

        std::vector<bool> taken(problem.constraint_count() + 1, false);
        for (ConstraintId id : covered) taken[id] = true;
        for (ConstraintId id : added) {
            if (taken[id]) continue; // already timetabled; re-solving covers it
            taken[id] = true;
        }

        IncrementPlan plan;
        plan.batches.push_back(covered);
        plan.batches.emplace_back(added.begin(), added.end());
        std::vector<ConstraintId> remaining;
        for (ConstraintId id = 1; id <= problem.constraint_count(); ++id)
            if (!taken[id]) remaining.push_back(id);
        std::stable_sort(remaining.begin(), remaining.end(), [&](ConstraintId a, ConstraintId b) {
            const int sa = problem.strength(a);
            const int sb = problem.strength(b);
            if (sa != sb) return sa > sb;
            return a < b;
        });
        const int batch_size = std::max(
            1, static_cast<int>(std::ceil(config.increment_fraction * problem.constraint_count())));
        for (std::size_t begin = 0; begin < remaining.size();
             begin += static_cast<std::size_t>(batch_size)) {
            const std::size_t end =
                std::min(remaining.size(), begin + static_cast<std::size_t>(batch_size));
            plan.batches.emplace_back(remaining.begin() + static_cast<long>(begin),
                                      remaining.begin() + static_cast<long>(end));
        }

        std::vector<Chromosome> seeds;
        for (const auto& genes : snap.solutions) {
            Chromosome c;
            for (const auto& g : genes)
                if (g.constraint >= 1 && g.constraint <= problem.constraint_count() &&
                    !std::binary_search(added_sorted.begin(), added_sorted.end(), g.constraint))
                    c.genes.push_back(g);
            if (is_feasible_partial(c, problem)) seeds.push_back(std::move(c));
        }

        EngineConfig attempt_config = config;
        attempt_config.budget.max_generations = generations_per_snapshot;
        attempt_config.budget.max_seconds = 0;
        Engine attempt(problem, attempt_config, plan);
        RunResult probe = attempt.run_seeded(seeds, 1);

        const bool batch_resolved =
            !probe.increments.empty() || probe.success ||
            (probe.best_genes.size() >= covered.size() + added.size());
        if (batch_resolved) {
            Engine full(problem, config, plan);
            outcome.result = full.run_seeded(std::move(seeds), 1);
            outcome.resolved = outcome.result.success;
            if (outcome.resolved) {
                outcome.snapshot_used = snap.increment;
                return outcome;
            }
        }

        int covered_strength = std::numeric_limits<int>::max();
        for (ConstraintId id : covered)
            covered_strength = std::min(covered_strength, problem.strength(id));
        int added_strength = 0;
        for (ConstraintId id : added) added_strength = std::max(added_strength, problem.strength(id));

        std::ostringstream report;
        report << "snapshot " << snap.increment << ": unsolved {";
        if (covered_strength >= added_strength) {
            for (std::size_t i = 0; i < added.size(); ++i)
                report << (i ? ", " : "") << "exam " << added[i];
        } else {
            for (std::size_t i = 0; i < covered.size(); ++i)
                report << (i ? ", " : "") << "exam " << covered[i];
        }
        report << "}";
        outcome.unresolved.push_back(report.str());
    }
    return outcome;
}

} // namespace ichea
