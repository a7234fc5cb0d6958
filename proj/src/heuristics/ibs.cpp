#include "bbcp/heuristics.hpp"
#include "select.hpp"

namespace bbcp {

IbsHeuristic::IbsHeuristic(const Model& model, double alpha)
    : impacts_(model.initial_domains(), alpha) {}

void IbsHeuristic::on_decision(VarId x, int v, double log_size_before, double log_size_after,
                               bool failed) {
    impacts_.observe(x, v, assignment_impact(log_size_before, log_size_after, failed));
}

double IbsHeuristic::variable_impact(VarId x, const DomainStore& store) const {
    double total = 0.0;
    store[x].for_each([&](int v) { total += 1.0 - impacts_.get_or(x, v, 0.0); });
    return total;
}

// Every value of every free variable is tried once at the root. A value
// whose labeling fails is removed for good.
InitStatus IbsHeuristic::initialize(SearchContext& ctx) {
    DomainStore& store = ctx.store();
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) {
        const VarId x{i};
        if (store.is_bound(x)) continue;
        for (int v : store[x].values()) {
            if (store.is_bound(x) || !store[x].contains(v)) continue;
            const double before = store.search_space_log_size();
            const int level = store.push_level();
            const PropagationResult r = ctx.apply(Decision::assign(x, v));
            ++probes_;
            const bool failed = !r.consistent();
            const double after = failed ? before : store.search_space_log_size();
            bool stop = false;
            if (!failed && store.all_bound()) stop = ctx.report_solution();
            store.restore_to(level);
            impacts_.set(x, v, assignment_impact(before, after, failed));
            if (stop) return InitStatus::Stop;
            if (failed && !ctx.apply(Decision::remove(x, v)).consistent())
                return InitStatus::Infeasible;
        }
    }
    return InitStatus::Ready;
}

// Branches on the variable whose remaining subtrees are estimated smallest.
VarId IbsHeuristic::select_variable(const DomainStore& store, Rng& rng) {
    detail::RandomBest<VarId, double, decltype(&detail::compare_less)> best(&detail::compare_less);
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) {
        const VarId x{i};
        if (!store.is_bound(x)) best.offer(x, variable_impact(x, store), rng);
    }
    return best.item();
}

int IbsHeuristic::select_value(VarId x, const DomainStore& store, Rng& rng) {
    detail::RandomBest<int, double, decltype(&detail::compare_less)> best(&detail::compare_less);
    store[x].for_each([&](int v) { best.offer(v, impacts_.get_or(x, v, 0.0), rng); });
    return best.item();
}

void IbsHeuristic::on_node(const NodeEvent& e, const DomainStore&) {
    if (e.refutation) return;
    on_decision(e.var, e.value, e.log_size_before, e.log_size_after, !e.result.consistent());
}

}  // namespace bbcp
