#ifndef BBCP_HEURISTICS_HPP
#define BBCP_HEURISTICS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "bbcp/domain.hpp"
#include "bbcp/model.hpp"
#include "bbcp/propagation.hpp"

namespace bbcp {

using Rng = std::mt19937_64;

/// Services the search exposes to a heuristic's root initialization.
class SearchContext {
public:
    virtual ~SearchContext() = default;

    virtual DomainStore& store() = 0;
    virtual Rng& rng() = 0;
    /// Applies decisions (plus any active objective bound) and propagates.
    virtual PropagationResult apply(std::span<const Decision> decisions) = 0;
    /// Called when the store is a full assignment. Returns true when the
    /// search wants to stop (first solution of a satisfaction problem).
    virtual bool report_solution() = 0;

    PropagationResult apply(const Decision& d) { return apply(std::span<const Decision>(&d, 1)); }
};

enum class InitStatus { Ready, Infeasible, Stop };

/// One labeling (`x = v`) or refutation (`x != v`) followed by propagation.
struct NodeEvent {
    VarId var;
    int value;
    bool refutation;
    /// ln S(P) before the decision and after propagation; only filled in
    /// when the heuristic asks for it (`wants_log_size`).
    double log_size_before;
    double log_size_after;
    const PropagationResult& result;
};

/**
 * @brief Black-box variable/value selection strategy.
 *
 * Selection is only called when at least one variable is unbound.
 */
class Heuristic {
public:
    virtual ~Heuristic() = default;

    virtual std::string_view name() const = 0;
    /// Root-node initialization (probing). The store is at level 0 and at a
    /// propagation fixpoint; values may be removed permanently.
    virtual InitStatus initialize(SearchContext&) { return InitStatus::Ready; }
    virtual VarId select_variable(const DomainStore& store, Rng& rng) = 0;
    virtual int select_value(VarId x, const DomainStore& store, Rng& rng) = 0;
    virtual void on_node(const NodeEvent&, const DomainStore&) {}
    virtual bool wants_log_size() const { return false; }
    /// Number of statistics entries currently held.
    virtual std::size_t state_size() const = 0;
    /// Probes (or simulated assignments) spent during initialization.
    virtual std::uint64_t probe_count() const { return 0; }
};

// ---------------------------------------------------------------------------
// Formulas shared by the heuristics.

/// Search-space contraction 1 - S(after)/S(before), from log sizes; 1 on failure.
double assignment_impact(double log_size_before, double log_size_after, bool failed);

/// (previous * (alpha - 1) + sample) / alpha.
double smoothed_update(double previous, double sample, double alpha);

/// Two-sided 95% Student-t critical value (table up to 30 degrees of freedom,
/// normal limit 1.960 beyond).
double t_critical(int degrees_of_freedom);

// ---------------------------------------------------------------------------

/**
 * @brief Per-(variable, value) smoothed estimate, Θ(Σ|D(x)|) storage.
 *
 * Values are indexed relative to the root domains it was built from. The
 * first sample of an entry is stored as is; later samples are blended with
 * `smoothed_update`.
 */
class AssignmentStats {
public:
    AssignmentStats() = default;
    AssignmentStats(std::span<const FiniteDomain> root, double alpha);

    std::optional<double> get(VarId x, int v) const;
    double get_or(VarId x, int v, double fallback) const;
    void observe(VarId x, int v, double sample);
    void set(VarId x, int v, double value);
    double alpha() const { return alpha_; }
    /// Entries that hold a value.
    std::size_t recorded() const { return recorded_; }
    /// Entries that can hold a value.
    std::size_t capacity() const { return values_.size(); }

private:
    std::optional<std::size_t> slot(VarId x, int v) const;

    double alpha_ = 8.0;
    std::vector<int> offset_;
    std::vector<int> span_;
    std::vector<std::size_t> base_;
    std::vector<double> values_;
    std::vector<char> present_;
    std::size_t recorded_ = 0;
};

/// Assignment impacts Ī(x=a).
using ImpactTable = AssignmentStats;

/// Variable activities A(x) plus optional assignment activities Ã(x=a).
class ActivityTable {
public:
    ActivityTable(std::size_t num_vars, double decay);
    ActivityTable(std::span<const FiniteDomain> root, double decay, double alpha);

    /// Decays every free variable, then adds 1 to each affected variable.
    void on_node(std::span<const VarId> affected, const DomainStore& store);
    /// Ã(x=v) update with A_k(x=v) = `affected_count`; no-op without value stats.
    void on_decision(VarId x, int v, std::size_t affected_count);

    double activity(VarId x) const { return activity_[x.index]; }
    void set_activity(VarId x, double a) { activity_[x.index] = a; }
    std::span<const double> activities() const { return activity_; }
    bool has_assignment_stats() const { return assignment_.has_value(); }
    const AssignmentStats& assignment_stats() const { return *assignment_; }
    AssignmentStats& assignment_stats() { return *assignment_; }
    double decay() const { return decay_; }
    std::size_t size() const;

private:
    std::vector<double> activity_;
    std::optional<AssignmentStats> assignment_;
    double decay_;
};

/// Constraint failure weights, one per propagator, initialized to 1.
class WeightTable {
public:
    explicit WeightTable(std::size_t num_constraints) : weight_(num_constraints, 1) {}

    void on_failure(PropagatorId c) { ++weight_[c.index]; }
    std::int64_t weight(PropagatorId c) const { return weight_[c.index]; }
    std::size_t size() const { return weight_.size(); }

private:
    std::vector<std::int64_t> weight_;
};

/**
 * @brief Running statistics of per-probe activity vectors (Welford).
 *
 * Optionally also keeps the plain running mean of every assignment
 * activity observed during probing.
 */
class ProbeAccumulator {
public:
    explicit ProbeAccumulator(std::size_t num_vars);
    ProbeAccumulator(std::span<const FiniteDomain> root, bool track_assignments);

    void add_probe(std::span<const double> activity);
    void observe_assignment(VarId x, int v, double activity);

    std::size_t probes() const { return count_; }
    double mean(VarId x) const { return mean_[x.index]; }
    /// Sample variance (n - 1 denominator); 0 for fewer than two probes.
    double variance(VarId x) const;
    double stddev(VarId x) const;
    /// max over variables with mean > eps of t(n-1) * sd / (sqrt(n) * mean);
    /// 0 when no variable qualifies, +inf with fewer than two probes.
    double max_relative_half_width(double eps = 1e-6) const;
    /// True when every variable's 95% interval is within delta of its mean.
    bool converged(double delta, double eps = 1e-6) const;

    bool tracks_assignments() const { return assignment_sum_.has_value(); }
    std::optional<double> assignment_mean(VarId x, int v) const;
    std::size_t num_vars() const { return mean_.size(); }

private:
    std::size_t count_ = 0;
    std::vector<double> mean_;
    std::vector<double> m2_;
    // Plain sums and counts; only set() is used, never the smoothed update.
    std::optional<AssignmentStats> assignment_sum_;
    std::optional<AssignmentStats> assignment_count_;
};

// ---------------------------------------------------------------------------

enum class HeuristicKind { Abs, Ibs, Wdeg };

struct HeuristicParams {
    double alpha = 8.0;
    double gamma = 0.999;
    double delta = 0.2;
    bool value_heuristic = true;
    std::size_t min_probes = 10;
    std::size_t max_probes = 1000;
    double activity_eps = 1e-6;
};

/// ABS probing stop rule: at least `min_probes` probes and every variable's
/// 95% interval within `delta` of its mean, or `max_probes` reached.
bool probing_complete(const ProbeAccumulator& acc, const HeuristicParams& params);

/// Impact-based search.
class IbsHeuristic final : public Heuristic {
public:
    IbsHeuristic(const Model& model, double alpha);

    std::string_view name() const override { return "ibs"; }
    InitStatus initialize(SearchContext& ctx) override;
    VarId select_variable(const DomainStore& store, Rng& rng) override;
    int select_value(VarId x, const DomainStore& store, Rng& rng) override;
    void on_node(const NodeEvent& e, const DomainStore& store) override;
    bool wants_log_size() const override { return true; }
    std::size_t state_size() const override { return impacts_.recorded(); }
    std::uint64_t probe_count() const override { return probes_; }

    /// Ī update for one labeling outcome.
    void on_decision(VarId x, int v, double log_size_before, double log_size_after, bool failed);
    /// Sum over current values of (1 - Ī(x=a)), missing entries counting as Ī = 0.
    double variable_impact(VarId x, const DomainStore& store) const;
    const ImpactTable& impacts() const { return impacts_; }
    ImpactTable& impacts() { return impacts_; }

private:
    ImpactTable impacts_;
    std::uint64_t probes_ = 0;
};

/// Activity-based search.
class AbsHeuristic final : public Heuristic {
public:
    AbsHeuristic(const Model& model, const HeuristicParams& params);

    std::string_view name() const override { return "abs"; }
    InitStatus initialize(SearchContext& ctx) override;
    VarId select_variable(const DomainStore& store, Rng& rng) override;
    int select_value(VarId x, const DomainStore& store, Rng& rng) override;
    void on_node(const NodeEvent& e, const DomainStore& store) override;
    std::size_t state_size() const override { return table_.size(); }
    std::uint64_t probe_count() const override { return probes_; }

    const ActivityTable& table() const { return table_; }
    ActivityTable& table() { return table_; }
    const HeuristicParams& params() const { return params_; }
    /// Receives every completed probe's activity vector (test instrumentation).
    void set_probe_observer(std::function<void(std::span<const double>)> f) {
        probe_observer_ = std::move(f);
    }

private:
    HeuristicParams params_;
    ActivityTable table_;
    std::function<void(std::span<const double>)> probe_observer_;
    std::uint64_t probes_ = 0;
};

/// Weighted-degree (dom/wdeg) variable ordering, ascending value order.
class WdegHeuristic final : public Heuristic {
public:
    explicit WdegHeuristic(const Model& model);

    std::string_view name() const override { return "wdeg"; }
    VarId select_variable(const DomainStore& store, Rng& rng) override;
    int select_value(VarId x, const DomainStore& store, Rng& rng) override;
    void on_node(const NodeEvent& e, const DomainStore& store) override;
    std::size_t state_size() const override { return weights_.size(); }

    /// Sum of weights of constraints on `x` with more than one unbound variable.
    std::int64_t weighted_degree(VarId x, const DomainStore& store) const;
    const WeightTable& weights() const { return weights_; }
    WeightTable& weights() { return weights_; }

private:
    const Model* model_;
    WeightTable weights_;
    std::vector<std::vector<PropagatorId>> constraints_of_;
    mutable std::vector<int> free_count_;
};

std::unique_ptr<Heuristic> make_heuristic(HeuristicKind kind, const Model& model,
                                          const HeuristicParams& params);

std::string_view to_string(HeuristicKind kind);
std::optional<HeuristicKind> parse_heuristic_kind(std::string_view s);

}  // namespace bbcp

#endif
