#include "bbcp/propagation.hpp"

namespace bbcp {

Engine::Engine(const Model& model)
    : model_(&model),
      watchers_(model.num_vars()),
      scheduled_(model.num_propagators(), 0) {
    for (std::uint32_t c = 0; c < model.num_propagators(); ++c)
        for (VarId x : model.propagator(PropagatorId{c}).scope())
            watchers_[x.index].push_back(PropagatorId{c});
}

void Engine::snapshot(const DomainStore& store) {
    sizes_before_.resize(store.num_vars());
    for (std::uint32_t i = 0; i < store.num_vars(); ++i) sizes_before_[i] = store.size(VarId{i});
}

void Engine::schedule(PropagatorId c) {
    if (scheduled_[c.index]) return;
    scheduled_[c.index] = 1;
    queue_.push_back(c);
}

void Engine::wake_modified(const DomainStore& store, std::optional<PropagatorId> running) {
    const bool skip_self = running && model_->propagator(*running).idempotent();
    for (VarId x : store.modified())
        for (PropagatorId c : watchers_[x.index])
            if (!(skip_self && c == *running)) schedule(c);
}

void Engine::reset_queue() {
    for (PropagatorId c : queue_) scheduled_[c.index] = 0;
    queue_.clear();
}

PropagationResult Engine::finish(const DomainStore& store, PropagationResult result) {
    for (std::uint32_t i = 0; i < store.num_vars(); ++i)
        if (store.size(VarId{i}) != sizes_before_[i]) result.affected.push_back(VarId{i});
    return result;
}

PropagationResult Engine::fixpoint(DomainStore& store) {
    while (!queue_.empty()) {
        const PropagatorId c = queue_.front();
        queue_.pop_front();
        scheduled_[c.index] = 0;
        store.clear_modified();
        const bool ok = model_->propagator(c).filter(store);
        if (!ok) {
            store.clear_modified();
            reset_queue();
            PropagationResult failed;
            failed.status = PropagationResult::Status::Failed;
            failed.failed_by = c;
            return finish(store, std::move(failed));
        }
        wake_modified(store, c);
    }
    store.clear_modified();
    return finish(store, {});
}

PropagationResult Engine::propagate_all(DomainStore& store) {
    snapshot(store);
    store.clear_modified();
    for (std::uint32_t c = 0; c < model_->num_propagators(); ++c) schedule(PropagatorId{c});
    return fixpoint(store);
}

PropagationResult Engine::apply(DomainStore& store, std::span<const Decision> decisions) {
    snapshot(store);
    store.clear_modified();
    for (const Decision& d : decisions) {
        ChangeOutcome out = ChangeOutcome::Unchanged;
        switch (d.kind) {
            case Decision::Kind::Assign: out = store.assign(d.var, d.value); break;
            case Decision::Kind::Remove: out = store.remove_value(d.var, d.value); break;
            case Decision::Kind::AtLeast: out = store.tighten_min(d.var, d.value); break;
            case Decision::Kind::AtMost: out = store.tighten_max(d.var, d.value); break;
        }
        if (out == ChangeOutcome::WouldEmpty) {
            store.clear_modified();
            PropagationResult failed;
            failed.status = PropagationResult::Status::Failed;
            return finish(store, std::move(failed));
        }
    }
    wake_modified(store, std::nullopt);
    return fixpoint(store);
}

}  // namespace bbcp
