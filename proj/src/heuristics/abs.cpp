#include <optional>
#include <utility>

#include "bbcp/heuristics.hpp"
#include "select.hpp"

namespace bbcp {

namespace {

ActivityTable make_table(const Model& model, const HeuristicParams& params) {
    if (params.value_heuristic)
        return ActivityTable(model.initial_domains(), params.gamma, params.alpha);
    return ActivityTable(model.num_vars(), params.gamma);
}

int uniform_value(const FiniteDomain& d, Rng& rng) {
    int k = std::uniform_int_distribution<int>(0, d.size() - 1)(rng);
    int v = d.min();
    while (k-- > 0) v = d.next(v);
    return v;
}

}  // namespace

bool probing_complete(const ProbeAccumulator& acc, const HeuristicParams& params) {
    if (acc.probes() >= params.max_probes) return true;
    return acc.probes() >= params.min_probes && acc.converged(params.delta, params.activity_eps);
}

AbsHeuristic::AbsHeuristic(const Model& model, const HeuristicParams& params)
    : params_(params), table_(make_table(model, params)) {}

// Random probes from the root. Per-probe activity counts how many decisions
// of the probe shrank each variable (no decay). Probing stops once the 95%
// interval of every variable's mean is within delta of that mean.
InitStatus AbsHeuristic::initialize(SearchContext& ctx) {
    DomainStore& store = ctx.store();
    Rng& rng = ctx.rng();
    if (store.all_bound()) return InitStatus::Ready;

    std::vector<FiniteDomain> root;
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) root.push_back(store[VarId{i}]);
    ProbeAccumulator acc(root, params_.value_heuristic);
    std::vector<double> activity(store.num_vars());
    std::vector<VarId> free;

    while (!probing_complete(acc, params_)) {
        std::fill(activity.begin(), activity.end(), 0.0);
        std::optional<std::pair<VarId, int>> shave;
        bool stop = false;
        const int level = store.push_level();
        for (bool first = true;; first = false) {
            free.clear();
            for (std::uint32_t i = 0; i < store.num_vars(); ++i)
                if (!store.is_bound(VarId{i})) free.push_back(VarId{i});
            if (free.empty()) {
                stop = ctx.report_solution();
                break;
            }
            const VarId x = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
            const int v = uniform_value(store[x], rng);
            const PropagationResult r = ctx.apply(Decision::assign(x, v));
            for (VarId y : r.affected) activity[y.index] += 1.0;
            acc.observe_assignment(x, v, static_cast<double>(r.affected.size()));
            if (!r.consistent()) {
                if (first) shave = std::pair{x, v};
                break;
            }
        }
        store.restore_to(level);
        acc.add_probe(activity);
        if (probe_observer_) probe_observer_(activity);
        if (stop) {
            probes_ = acc.probes();
            return InitStatus::Stop;
        }
        if (shave && !ctx.apply(Decision::remove(shave->first, shave->second)).consistent()) {
            probes_ = acc.probes();
            return InitStatus::Infeasible;
        }
    }
    probes_ = acc.probes();

    for (std::uint32_t i = 0; i < store.num_vars(); ++i) table_.set_activity(VarId{i}, acc.mean(VarId{i}));
    if (table_.has_assignment_stats()) {
        for (std::uint32_t i = 0; i < store.num_vars(); ++i) {
            const VarId x{i};
            store[x].for_each([&](int v) {
                if (const auto m = acc.assignment_mean(x, v))
                    table_.assignment_stats().set(x, v, *m);
            });
        }
    }
    return InitStatus::Ready;
}

VarId AbsHeuristic::select_variable(const DomainStore& store, Rng& rng) {
    detail::RandomBest<VarId, double, decltype(&detail::compare_greater)> best(&detail::compare_greater);
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) {
        const VarId x{i};
        if (!store.is_bound(x))
            best.offer(x, table_.activity(x) / static_cast<double>(store.size(x)), rng);
    }
    return best.item();
}

int AbsHeuristic::select_value(VarId x, const DomainStore& store, Rng& rng) {
    if (!table_.has_assignment_stats()) return store[x].min();
    detail::RandomBest<int, double, decltype(&detail::compare_less)> best(&detail::compare_less);
    const AssignmentStats& stats = table_.assignment_stats();
    store[x].for_each([&](int v) { best.offer(v, stats.get_or(x, v, 0.0), rng); });
    return best.item();
}

void AbsHeuristic::on_node(const NodeEvent& e, const DomainStore& store) {
    table_.on_node(e.result.affected, store);
    if (!e.refutation) table_.on_decision(e.var, e.value, e.result.affected.size());
}

}  // namespace bbcp
