#ifndef BBCP_CONSTRAINTS_HPP
#define BBCP_CONSTRAINTS_HPP

#include <cstdint>
#include <vector>

#include "bbcp/propagator.hpp"

namespace bbcp {

struct LinearTerm {
    std::int64_t coef;
    VarId var;
};

/// sum(coef_i * x_i) <= rhs, bounds consistency.
class LinearLeq final : public Propagator {
public:
    LinearLeq(std::vector<LinearTerm> terms, std::int64_t rhs);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "linear_leq"; }

    std::span<const LinearTerm> terms() const { return terms_; }
    std::int64_t rhs() const { return rhs_; }

private:
    std::vector<LinearTerm> terms_;
    std::int64_t rhs_;
};

/// sum(coef_i * x_i) == rhs, bounds consistency (both directions to a local fixpoint).
class LinearEq final : public Propagator {
public:
    LinearEq(std::vector<LinearTerm> terms, std::int64_t rhs);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "linear_eq"; }

    std::span<const LinearTerm> terms() const { return terms_; }
    std::int64_t rhs() const { return rhs_; }

private:
    std::vector<LinearTerm> terms_;
    std::vector<LinearTerm> negated_;
    std::int64_t rhs_;
};

/**
 * @brief Pairwise distinctness at the forward-checking level.
 *
 * The value of every bound variable is removed from the other domains,
 * cascading through variables that become bound. No Hall-interval or
 * matching reasoning.
 */
class AllDifferent final : public Propagator {
public:
    explicit AllDifferent(std::vector<VarId> vars);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "alldifferent"; }
};

/**
 * @brief sum(w_i * x_i) <= capacity over 0/1 variables with w_i >= 0.
 *
 * With non-negative weights and only an upper capacity, the reachable
 * weight table of the DP collapses to a residual-capacity test against the
 * mandatory items, which gives domain consistency.
 */
class BinaryKnapsackAtMost final : public Propagator {
public:
    BinaryKnapsackAtMost(std::vector<VarId> vars, std::vector<std::int64_t> weights,
                         std::int64_t capacity);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "binary_knapsack_atmost"; }

    std::span<const std::int64_t> weights() const { return weights_; }
    std::int64_t capacity() const { return capacity_; }

private:
    std::vector<std::int64_t> weights_;
    std::int64_t capacity_;
};

/// x + offset <= y. `x < y` is offset 1, `x <= y` is offset 0.
class LessEqOffset final : public Propagator {
public:
    LessEqOffset(VarId x, VarId y, int offset);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "less_eq"; }

    VarId x() const { return x_; }
    VarId y() const { return y_; }
    int offset() const { return offset_; }

private:
    VarId x_;
    VarId y_;
    int offset_;
};

/// x <= bound (or x >= bound when `upper` is false).
class UnaryBound final : public Propagator {
public:
    UnaryBound(VarId x, int bound, bool upper);

    bool filter(DomainStore& store) const override;
    bool satisfied(std::span<const int> assignment) const override;
    bool idempotent() const override { return true; }
    std::string_view name() const override { return "unary_bound"; }

private:
    VarId x_;
    int bound_;
    bool upper_;
};

}  // namespace bbcp

#endif
