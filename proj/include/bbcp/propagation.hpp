#ifndef BBCP_PROPAGATION_HPP
#define BBCP_PROPAGATION_HPP

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "bbcp/domain.hpp"
#include "bbcp/model.hpp"

namespace bbcp {

/// Outcome of one fixpoint computation.
struct PropagationResult {
    enum class Status { Consistent, Failed };

    Status status = Status::Consistent;
    /// Propagator whose filtering hit a wipeout. Empty when the failure came
    /// from the decision itself (e.g. refuting the last value of a domain).
    std::optional<PropagatorId> failed_by;
    /// Variables whose domain shrank during the call, sorted by index.
    /// On failure: those shrunk before the wipeout.
    std::vector<VarId> affected;

    bool consistent() const { return status == Status::Consistent; }
};

/// A domain operation applied before propagation.
struct Decision {
    enum class Kind { Assign, Remove, AtLeast, AtMost };

    Kind kind;
    VarId var;
    int value;

    static Decision assign(VarId x, int v) { return {Kind::Assign, x, v}; }
    static Decision remove(VarId x, int v) { return {Kind::Remove, x, v}; }
    static Decision at_least(VarId x, int v) { return {Kind::AtLeast, x, v}; }
    static Decision at_most(VarId x, int v) { return {Kind::AtMost, x, v}; }
};

/**
 * @brief FIFO fixpoint engine over a model's propagators.
 *
 * Propagators are woken by any change to a scope variable. A scheduled
 * flag keeps each propagator in the queue at most once. The affected set
 * is computed by diffing domain sizes against a snapshot taken at entry,
 * so it also covers the variables touched by the applied decisions.
 */
class Engine {
public:
    explicit Engine(const Model& model);

    /// Runs every propagator to a fixpoint (root propagation).
    PropagationResult propagate_all(DomainStore& store);

    /// Applies `decisions` in order, then propagates to a fixpoint.
    PropagationResult apply(DomainStore& store, std::span<const Decision> decisions);
    PropagationResult apply(DomainStore& store, const Decision& decision) {
        return apply(store, std::span<const Decision>(&decision, 1));
    }

    const Model& model() const { return *model_; }
    /// Propagators whose scope contains `x`.
    std::span<const PropagatorId> watchers(VarId x) const { return watchers_[x.index]; }

private:
    void snapshot(const DomainStore& store);
    void schedule(PropagatorId c);
    void wake_modified(const DomainStore& store, std::optional<PropagatorId> running);
    PropagationResult fixpoint(DomainStore& store);
    PropagationResult finish(const DomainStore& store, PropagationResult result);
    void reset_queue();

    const Model* model_;
    std::vector<std::vector<PropagatorId>> watchers_;
    std::deque<PropagatorId> queue_;
    std::vector<char> scheduled_;
    std::vector<int> sizes_before_;
};

}  // namespace bbcp

#endif
