#pragma once

#include <vector>

#include "ichea/core.hpp"

namespace ichea {

/// True iff placing `row` at `column` keeps every row and both diagonals
/// clear against the genes of `c`. The column must be unused in `c`.
bool queen_compatible(int column, int row, const Chromosome& c);

/// All solutions of the N-Queen problem as row vectors (index = column - 1),
/// by exhaustive backtracking. Restricted to N <= 10: this is the acceptance
/// oracle, not a solver.
std::vector<std::vector<int>> enumerate_solutions(int n);

/// N-Queen problem: constraint k is the k-th column; chromosomes assign a
/// consecutive column prefix, so gene position and column coincide and
/// fusion appends donor rows at the receiver's next column.
class NQueenAdapter final : public ProblemAdapter {
public:
    explicit NQueenAdapter(int n) : n_(n) { require(n > 0, "board size must be positive"); }

    int n() const { return n_; }
    int constraint_count() const override { return n_; }
    std::vector<int> domain(ConstraintId) const override;
    bool compatible(const ConstraintAssignment& a, const Chromosome& c) const override;
    int strength(ConstraintId) const override { return 0; }

    int fusion_key(const ConstraintAssignment& g) const override { return g.value - 1; }
    int fusion_domain_size() const override { return n_; }
    ConstraintAssignment adapt_for_append(const ConstraintAssignment& g,
                                          const Chromosome& receiver) const override {
        return {first_unused_column(receiver), g.value};
    }

    Chromosome random_chromosome(std::span<const ConstraintId> batch, Rng& rng) const override;
    std::optional<ConstraintAssignment>
    propose_extension(const Chromosome& c, std::span<const ConstraintId> active,
                      Rng& rng) const override;

    static int first_unused_column(const Chromosome& c);

    /// Chromosome from a row sequence: rows[k] is the queen of column k + 1.
    static Chromosome from_rows(const std::vector<int>& rows);
    static std::vector<int> to_rows(const Chromosome& c);

private:
    int n_;
};

struct FusionOpCount {
    std::size_t measured = 0; // instrumented elementary operations
    std::size_t bound = 0;    // (l1 + l2 + N) + N * (l1' + l2')
};

/// Instrumented fusion of two N-Queen partial solutions: the measured count
/// covers the duplicate-marking pass and every append comparison, and never
/// exceeds the bound.
FusionOpCount count_fusion_ops(const Chromosome& a, const Chromosome& b,
                               const NQueenAdapter& problem);

} // namespace ichea
