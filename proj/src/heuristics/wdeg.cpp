#include "bbcp/heuristics.hpp"
#include "select.hpp"

namespace bbcp {

namespace {

// Score of a candidate for min |D(x)| / wdeg(x); wdeg = 0 means +inf.
struct Ratio {
    std::int64_t size;
    std::int64_t wdeg;
};

// >0 when a is strictly smaller than b. Exact: compares cross products.
int compare_ratio(const Ratio& a, const Ratio& b) {
    if (a.wdeg == 0 || b.wdeg == 0) {
        if (a.wdeg == 0 && b.wdeg == 0) return 0;
        return a.wdeg == 0 ? -1 : 1;
    }
    const std::int64_t lhs = a.size * b.wdeg;
    const std::int64_t rhs = b.size * a.wdeg;
    return lhs < rhs ? 1 : (lhs > rhs ? -1 : 0);
}

}  // namespace

WdegHeuristic::WdegHeuristic(const Model& model)
    : model_(&model),
      weights_(model.num_propagators()),
      constraints_of_(model.num_vars()),
      free_count_(model.num_propagators(), 0) {
    for (std::uint32_t c = 0; c < model.num_propagators(); ++c)
        for (VarId x : model.propagator(PropagatorId{c}).scope())
            constraints_of_[x.index].push_back(PropagatorId{c});
}

std::int64_t WdegHeuristic::weighted_degree(VarId x, const DomainStore& store) const {
    std::int64_t total = 0;
    for (PropagatorId c : constraints_of_[x.index]) {
        int future = 0;
        for (VarId y : model_->propagator(c).scope())
            if (!store.is_bound(y) && ++future > 1) break;
        if (future > 1) total += weights_.weight(c);
    }
    return total;
}

VarId WdegHeuristic::select_variable(const DomainStore& store, Rng& rng) {
    for (std::uint32_t c = 0; c < model_->num_propagators(); ++c) {
        int future = 0;
        for (VarId y : model_->propagator(PropagatorId{c}).scope())
            if (!store.is_bound(y)) ++future;
        free_count_[c] = future;
    }
    detail::RandomBest<VarId, Ratio, decltype(&compare_ratio)> best(&compare_ratio);
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) {
        const VarId x{i};
        if (store.is_bound(x)) continue;
        std::int64_t wdeg = 0;
        for (PropagatorId c : constraints_of_[i])
            if (free_count_[c.index] > 1) wdeg += weights_.weight(c);
        best.offer(x, Ratio{store.size(x), wdeg}, rng);
    }
    return best.item();
}

int WdegHeuristic::select_value(VarId x, const DomainStore& store, Rng&) { return store[x].min(); }

void WdegHeuristic::on_node(const NodeEvent& e, const DomainStore&) {
    if (!e.result.consistent() && e.result.failed_by) weights_.on_failure(*e.result.failed_by);
}

}  // namespace bbcp
