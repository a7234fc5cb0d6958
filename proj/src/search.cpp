#include "bbcp/search.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "bbcp/propagation.hpp"

namespace bbcp {

RestartPolicy RestartPolicy::geometric(double rho, std::uint64_t initial_limit) {
    if (!(rho > 1.0)) throw std::invalid_argument("geometric restarts need rho > 1");
    return {Mode::Geometric, rho, initial_limit};
}

RestartController::RestartController(RestartPolicy policy)
    : policy_(policy), limit_(policy.initial_limit == 0 ? 1 : policy.initial_limit) {}

std::uint64_t RestartController::next_limit(std::uint64_t limit, double rho) {
    // The slack absorbs representation error, e.g. 30 * 1.1 = 33.000000000000004.
    const double product = rho * static_cast<double>(limit);
    return static_cast<std::uint64_t>(std::ceil(product - 1e-9 * product));
}

RestartController::Signal RestartController::on_failure() {
    if (policy_.mode == RestartPolicy::Mode::None) return Signal::Continue;
    if (++failures_ < limit_) return Signal::Continue;
    failures_ = 0;
    ++round_;
    limit_ = next_limit(limit_, policy_.rho);
    return Signal::RestartNow;
}

std::string_view to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::SolutionFound: return "solution";
        case SearchStatus::ProvedInfeasible: return "infeasible";
        case SearchStatus::ProvedOptimal: return "optimal";
        case SearchStatus::TimedOut: return "timeout";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

class Search final : public SearchContext {
public:
    Search(const Model& model, Heuristic& heuristic, const SearchOptions& options, Rng& rng)
        : model_(model),
          heuristic_(heuristic),
          options_(options),
          rng_(rng),
          engine_(model),
          store_(model.initial_domains()),
          restart_(resolve_policy()),
          start_(Clock::now()) {}

    SearchStats run();
    InitStatus root_only();
    const DomainStore& domains() const { return store_; }

    DomainStore& store() override { return store_; }
    Rng& rng() override { return rng_; }
    PropagationResult apply(std::span<const Decision> decisions) override;
    bool report_solution() override;

private:
    enum class Exit { Exhausted, Stop, Restart, Limit };

    RestartPolicy resolve_policy() const;
    Exit dfs();
    Exit on_failure();
    PropagationResult branch(VarId x, int v, bool refutation);
    bool out_of_time();
    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }
    std::optional<Decision> bound_decision() const;

    const Model& model_;
    Heuristic& heuristic_;
    const SearchOptions& options_;
    Rng& rng_;
    Engine engine_;
    DomainStore store_;
    RestartController restart_;
    Clock::time_point start_;
    SearchStats stats_;
    std::optional<std::int64_t> incumbent_;
    std::uint64_t node_ticks_ = 0;
    bool timed_out_ = false;
    bool initializing_ = false;
    std::vector<Decision> scratch_;
};

RestartPolicy Search::resolve_policy() const {
    RestartPolicy p = options_.all_solutions ? RestartPolicy::none() : options_.restart;
    if (p.initial_limit == 0) p.initial_limit = std::max<std::uint64_t>(1, 3 * model_.num_vars());
    return p;
}

std::optional<Decision> Search::bound_decision() const {
    const auto& obj = model_.objective();
    if (!obj || !incumbent_ || options_.all_solutions) return std::nullopt;
    const auto bound = obj->direction == Direction::Maximize ? *incumbent_ + 1 : *incumbent_ - 1;
    const int clamped = static_cast<int>(std::clamp<std::int64_t>(bound, INT32_MIN / 2, INT32_MAX / 2));
    return obj->direction == Direction::Maximize ? Decision::at_least(obj->var, clamped)
                                                 : Decision::at_most(obj->var, clamped);
}

PropagationResult Search::apply(std::span<const Decision> decisions) {
    scratch_.clear();
    if (const auto b = bound_decision()) scratch_.push_back(*b);
    scratch_.insert(scratch_.end(), decisions.begin(), decisions.end());
    return engine_.apply(store_, scratch_);
}

bool Search::report_solution() {
    // Enumeration collects solutions from the tree only, so probes that
    // happen to reach a leaf are not counted twice.
    if (options_.all_solutions && initializing_) return false;
    std::vector<int> values(store_.num_vars());
    for (std::uint32_t i = 0; i < store_.num_vars(); ++i) values[i] = store_.value(VarId{i});
    const auto& obj = model_.objective();
    const std::int64_t objective = obj ? values[obj->var.index] : 0;
    if (obj && !options_.all_solutions) {
        if (incumbent_ && !(obj->direction == Direction::Maximize ? objective > *incumbent_
                                                                  : objective < *incumbent_))
            return false;
        incumbent_ = objective;
    }
    stats_.solutions.push_back({objective, elapsed()});
    stats_.assignment = values;
    if (options_.on_solution) options_.on_solution(values);
    return !obj && !options_.all_solutions;
}

bool Search::out_of_time() {
    if (timed_out_) return true;
    if ((++node_ticks_ & 255u) != 0) return false;
    timed_out_ = elapsed() > options_.limits.timeout_s;
    return timed_out_;
}

PropagationResult Search::branch(VarId x, int v, bool refutation) {
    const bool want_log = heuristic_.wants_log_size();
    const double before = want_log ? store_.search_space_log_size() : 0.0;
    const Decision d = refutation ? Decision::remove(x, v) : Decision::assign(x, v);
    PropagationResult r = apply(std::span<const Decision>(&d, 1));
    const double after = want_log && r.consistent() ? store_.search_space_log_size() : before;
    heuristic_.on_node(NodeEvent{x, v, refutation, before, after, r}, store_);
    return r;
}

Search::Exit Search::on_failure() {
    ++stats_.failures;
    if (stats_.failures >= options_.limits.max_failures) return Exit::Limit;
    return restart_.on_failure() == RestartController::Signal::RestartNow ? Exit::Restart
                                                                          : Exit::Exhausted;
}

// Each frame owns one node. The x = v child gets its own level; the x != v
// refutation is applied in place and the loop re-selects a variable, so a
// failed refutation fails the whole frame (the caller restores).
Search::Exit Search::dfs() {
    for (;;) {
        if (out_of_time()) return Exit::Limit;
        if (store_.all_bound()) return report_solution() ? Exit::Stop : Exit::Exhausted;

        const VarId x = heuristic_.select_variable(store_, rng_);
        const int v = heuristic_.select_value(x, store_, rng_);

        const int level = store_.push_level();
        ++stats_.choice_points;
        const PropagationResult left = branch(x, v, false);
        const Exit sub = left.consistent() ? dfs() : on_failure();
        store_.restore_to(level);
        if (sub != Exit::Exhausted) return sub;

        const PropagationResult right = branch(x, v, true);
        if (!right.consistent()) return on_failure();
    }
}

InitStatus Search::root_only() {
    if (!engine_.propagate_all(store_).consistent()) return InitStatus::Infeasible;
    initializing_ = true;
    const InitStatus status = heuristic_.initialize(*this);
    initializing_ = false;
    return status;
}

SearchStats Search::run() {
    const InitStatus init = root_only();
    stats_.probes = heuristic_.probe_count();
    const bool optimizing = model_.objective().has_value() && !options_.all_solutions;
    auto exhausted_status = [&] {
        if (optimizing) return incumbent_ ? SearchStatus::ProvedOptimal : SearchStatus::ProvedInfeasible;
        return stats_.solutions.empty() ? SearchStatus::ProvedInfeasible : SearchStatus::SolutionFound;
    };

    if (init == InitStatus::Infeasible) {
        stats_.status = exhausted_status();
    } else if (init == InitStatus::Stop) {
        stats_.status = SearchStatus::SolutionFound;
    } else {
        for (;;) {
            const int level = store_.push_level();
            Exit e = Exit::Exhausted;
            if (const auto b = bound_decision(); !b || engine_.apply(store_, *b).consistent())
                e = dfs();
            store_.restore_to(level);
            if (e == Exit::Restart) {
                ++stats_.restarts;
                continue;
            }
            if (e == Exit::Stop) stats_.status = SearchStatus::SolutionFound;
            else if (e == Exit::Limit) stats_.status = SearchStatus::TimedOut;
            else stats_.status = exhausted_status();
            break;
        }
    }
    stats_.wall_time = elapsed();
    return stats_;
}

}  // namespace

SearchStats solve(const Model& model, Heuristic& heuristic, const SearchOptions& options, Rng& rng) {
    if (options.all_solutions && model.objective())
        throw std::invalid_argument("all-solutions mode is for satisfaction models");
    Search search(model, heuristic, options, rng);
    return search.run();
}

SearchStats branch_and_bound(const Model& model, Heuristic& heuristic, const SearchOptions& options,
                             Rng& rng) {
    if (!model.objective()) throw std::invalid_argument("branch_and_bound: model has no objective");
    return solve(model, heuristic, options, rng);
}

RootReport initialize_root(const Model& model, Heuristic& heuristic, Rng& rng) {
    SearchOptions options;
    Search search(model, heuristic, options, rng);
    const InitStatus status = search.root_only();
    RootReport report{status, {}};
    for (std::uint32_t i = 0; i < model.num_vars(); ++i) report.domains.push_back(search.domains()[VarId{i}]);
    return report;
}

}  // namespace bbcp
