#include "bbcp/constraints.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace bbcp {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) == (b < 0))) ++q;
    return q;
}

int clamp_to_int(std::int64_t v) {
    return static_cast<int>(std::clamp<std::int64_t>(v, INT32_MIN / 2, INT32_MAX / 2));
}

std::vector<LinearTerm> drop_zero_terms(std::vector<LinearTerm> terms) {
    std::erase_if(terms, [](const LinearTerm& t) { return t.coef == 0; });
    return terms;
}

std::vector<VarId> vars_of(const std::vector<LinearTerm>& terms) {
    std::vector<VarId> vars;
    vars.reserve(terms.size());
    for (const auto& t : terms) vars.push_back(t.var);
    return vars;
}

std::int64_t evaluate(std::span<const LinearTerm> terms, std::span<const int> assignment) {
    std::int64_t sum = 0;
    for (const auto& t : terms) sum += t.coef * assignment[t.var.index];
    return sum;
}

// One pass of bounds reasoning for sum(terms) <= rhs. A single pass is a
// fixpoint: tightening an upper bound of a positive term (or a lower bound
// of a negative one) never changes the minimum of the sum.
bool filter_leq(std::span<const LinearTerm> terms, std::int64_t rhs, DomainStore& store,
                bool& changed) {
    std::int64_t sum_min = 0;
    for (const auto& t : terms) {
        const auto& d = store[t.var];
        sum_min += t.coef > 0 ? t.coef * d.min() : t.coef * d.max();
    }
    if (sum_min > rhs) return false;
    for (const auto& t : terms) {
        const auto& d = store[t.var];
        const std::int64_t own = t.coef > 0 ? t.coef * d.min() : t.coef * d.max();
        const std::int64_t slack = rhs - (sum_min - own);
        ChangeOutcome out;
        if (t.coef > 0)
            out = store.tighten_max(t.var, clamp_to_int(floor_div(slack, t.coef)));
        else
            out = store.tighten_min(t.var, clamp_to_int(ceil_div(slack, t.coef)));
        if (out == ChangeOutcome::WouldEmpty) return false;
        if (out == ChangeOutcome::Shrunk) changed = true;
    }
    return true;
}

}  // namespace

Propagator::Propagator(std::vector<VarId> scope) : scope_(std::move(scope)) {
    if (scope_.empty()) throw std::invalid_argument("propagator scope is empty");
    std::unordered_set<std::uint32_t> seen;
    for (VarId x : scope_)
        if (!seen.insert(x.index).second)
            throw std::invalid_argument("propagator scope repeats a variable");
}

LinearLeq::LinearLeq(std::vector<LinearTerm> terms, std::int64_t rhs)
    : Propagator(vars_of(drop_zero_terms(terms))), terms_(drop_zero_terms(std::move(terms))), rhs_(rhs) {}

bool LinearLeq::filter(DomainStore& store) const {
    bool changed = false;
    return filter_leq(terms_, rhs_, store, changed);
}

bool LinearLeq::satisfied(std::span<const int> assignment) const {
    return evaluate(terms_, assignment) <= rhs_;
}

LinearEq::LinearEq(std::vector<LinearTerm> terms, std::int64_t rhs)
    : Propagator(vars_of(drop_zero_terms(terms))), terms_(drop_zero_terms(std::move(terms))), rhs_(rhs) {
    negated_ = terms_;
    for (auto& t : negated_) t.coef = -t.coef;
}

bool LinearEq::filter(DomainStore& store) const {
    for (;;) {
        bool changed = false;
        if (!filter_leq(terms_, rhs_, store, changed)) return false;
        if (!filter_leq(negated_, -rhs_, store, changed)) return false;
        if (!changed) return true;
    }
}

bool LinearEq::satisfied(std::span<const int> assignment) const {
    return evaluate(terms_, assignment) == rhs_;
}

AllDifferent::AllDifferent(std::vector<VarId> vars) : Propagator(std::move(vars)) {}

bool AllDifferent::filter(DomainStore& store) const {
    const auto vars = scope();
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (store.is_bound(vars[i])) pending.push_back(i);
    while (!pending.empty()) {
        const std::size_t i = pending.back();
        pending.pop_back();
        const int v = store.value(vars[i]);
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (j == i) continue;
            const bool was_bound = store.is_bound(vars[j]);
            const ChangeOutcome out = store.remove_value(vars[j], v);
            if (out == ChangeOutcome::WouldEmpty) return false;
            if (out == ChangeOutcome::Shrunk && !was_bound && store.is_bound(vars[j]))
                pending.push_back(j);
        }
    }
    return true;
}

bool AllDifferent::satisfied(std::span<const int> assignment) const {
    std::unordered_set<int> seen;
    for (VarId x : scope())
        if (!seen.insert(assignment[x.index]).second) return false;
    return true;
}

BinaryKnapsackAtMost::BinaryKnapsackAtMost(std::vector<VarId> vars,
                                           std::vector<std::int64_t> weights,
                                           std::int64_t capacity)
    : Propagator(std::move(vars)), weights_(std::move(weights)), capacity_(capacity) {
    if (weights_.size() != scope().size())
        throw std::invalid_argument("binary_knapsack_atmost: weight count mismatch");
    if (std::any_of(weights_.begin(), weights_.end(), [](auto w) { return w < 0; }))
        throw std::invalid_argument("binary_knapsack_atmost: negative weight");
}

bool BinaryKnapsackAtMost::filter(DomainStore& store) const {
    const auto vars = scope();
    std::int64_t mandatory = 0;
    for (std::size_t i = 0; i < vars.size(); ++i)
        if (store[vars[i]].min() >= 1) mandatory += weights_[i];
    if (mandatory > capacity_) return false;
    const std::int64_t residual = capacity_ - mandatory;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        const auto& d = store[vars[i]];
        if (d.min() < 1 && d.max() >= 1 && weights_[i] > residual)
            if (store.tighten_max(vars[i], 0) == ChangeOutcome::WouldEmpty) return false;
    }
    return true;
}

bool BinaryKnapsackAtMost::satisfied(std::span<const int> assignment) const {
    std::int64_t total = 0;
    const auto vars = scope();
    for (std::size_t i = 0; i < vars.size(); ++i) total += weights_[i] * assignment[vars[i].index];
    return total <= capacity_;
}

LessEqOffset::LessEqOffset(VarId x, VarId y, int offset)
    : Propagator({x, y}), x_(x), y_(y), offset_(offset) {}

bool LessEqOffset::filter(DomainStore& store) const {
    if (store.tighten_max(x_, store[y_].max() - offset_) == ChangeOutcome::WouldEmpty) return false;
    if (store.tighten_min(y_, store[x_].min() + offset_) == ChangeOutcome::WouldEmpty) return false;
    return true;
}

bool LessEqOffset::satisfied(std::span<const int> assignment) const {
    return assignment[x_.index] + offset_ <= assignment[y_.index];
}

UnaryBound::UnaryBound(VarId x, int bound, bool upper)
    : Propagator({x}), x_(x), bound_(bound), upper_(upper) {}

bool UnaryBound::filter(DomainStore& store) const {
    const ChangeOutcome out = upper_ ? store.tighten_max(x_, bound_) : store.tighten_min(x_, bound_);
    return out != ChangeOutcome::WouldEmpty;
}

bool UnaryBound::satisfied(std::span<const int> assignment) const {
    const int v = assignment[x_.index];
    return upper_ ? v <= bound_ : v >= bound_;
}

}  // namespace bbcp
