#include "ichea/nqueen.hpp"

#include <cstdlib>

#include "ichea/crossover.hpp"

namespace ichea {

bool queen_compatible(int column, int row, const Chromosome& c) {
    for (const auto& g : c.genes) {
        require(g.constraint != column, "duplicate column");
        if (g.value == row) return false;
        if (std::abs(g.constraint - column) == std::abs(g.value - row)) return false;
    }
    return true;
}

std::vector<int> NQueenAdapter::domain(ConstraintId) const {
    std::vector<int> rows(n_);
    for (int r = 0; r < n_; ++r) rows[r] = r + 1;
    return rows;
}

bool NQueenAdapter::compatible(const ConstraintAssignment& a, const Chromosome& c) const {
    return queen_compatible(a.constraint, a.value, c);
}

Chromosome NQueenAdapter::random_chromosome(std::span<const ConstraintId> batch, Rng& rng) const {
    // Chromosomes are column prefixes: filling stops at the first column
    // whose random row clashes, instead of skipping it.
    int limit = 0;
    for (ConstraintId id : batch) limit = std::max(limit, id);
    Chromosome c;
    std::uniform_int_distribution<int> row(1, n_);
    for (int column = 1; column <= limit; ++column) {
        ConstraintAssignment g{column, row(rng)};
        if (!compatible(g, c)) break;
        c.genes.push_back(g);
    }
    return c;
}

int NQueenAdapter::first_unused_column(const Chromosome& c) {
    int column = 1;
    while (c.find(column) != nullptr) ++column;
    return column;
}

std::optional<ConstraintAssignment>
NQueenAdapter::propose_extension(const Chromosome& c, std::span<const ConstraintId> active,
                                 Rng& rng) const {
    const int column = first_unused_column(c);
    bool in_active = false;
    for (ConstraintId id : active)
        if (id == column) in_active = true;
    if (!in_active) return std::nullopt;
    std::vector<int> safe;
    for (int row = 1; row <= n_; ++row)
        if (queen_compatible(column, row, c)) safe.push_back(row);
    if (safe.empty()) return std::nullopt;
    std::uniform_int_distribution<std::size_t> pick(0, safe.size() - 1);
    return ConstraintAssignment{column, safe[pick(rng)]};
}

Chromosome NQueenAdapter::from_rows(const std::vector<int>& rows) {
    Chromosome c;
    c.genes.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k)
        c.genes.push_back({static_cast<int>(k) + 1, rows[k]});
    return c;
}

std::vector<int> NQueenAdapter::to_rows(const Chromosome& c) {
    std::vector<int> rows;
    rows.reserve(c.genes.size());
    for (const auto& g : c.genes) rows.push_back(g.value);
    return rows;
}

FusionOpCount count_fusion_ops(const Chromosome& a, const Chromosome& b,
                               const NQueenAdapter& problem) {
    const FusionPair pair = intermarriage_fuse_unchecked(a, b, problem);

    std::vector<int> keys_a, keys_b;
    for (const auto& g : a.genes) keys_a.push_back(problem.fusion_key(g));
    for (const auto& g : b.genes) keys_b.push_back(problem.fusion_key(g));
    const NonDuplicateSets sets = mark_nonduplicates(keys_a, keys_b, problem.fusion_domain_size());

    const std::size_t n = static_cast<std::size_t>(problem.n());
    FusionOpCount out;
    out.measured = pair.total_ops;
    out.bound = (keys_a.size() + keys_b.size() + n) + n * (sets.first.size() + sets.second.size());
    return out;
}

std::vector<std::vector<int>> enumerate_solutions(int n) {
    require(n >= 1 && n <= 10, "oracle scale exceeded");
    std::vector<std::vector<int>> solutions;
    std::vector<int> rows;
    Chromosome partial;

    auto place = [&](auto&& self, int column) -> void {
        if (column > n) {
            solutions.push_back(rows);
            return;
        }
        for (int r = 1; r <= n; ++r) {
            if (!queen_compatible(column, r, partial)) continue;
            partial.genes.push_back({column, r});
            rows.push_back(r);
            self(self, column + 1);
            rows.pop_back();
            partial.genes.pop_back();
        }
    };
    place(place, 1);
    return solutions;
}

} // namespace ichea
