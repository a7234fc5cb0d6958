#ifndef BBCP_PROPAGATOR_HPP
#define BBCP_PROPAGATOR_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "bbcp/domain.hpp"

namespace bbcp {

struct PropagatorId {
    std::uint32_t index = 0;

    friend auto operator<=>(PropagatorId, PropagatorId) = default;
};

/**
 * @brief Filtering algorithm for one constraint.
 *
 * Propagators are stateless: everything they know about the search lives
 * in the DomainStore, so a model (and its propagators) can be shared
 * read-only between independent solves.
 */
class Propagator {
public:
    /// Throws std::invalid_argument on an empty scope or duplicated variables.
    explicit Propagator(std::vector<VarId> scope);
    virtual ~Propagator() = default;

    std::span<const VarId> scope() const { return scope_; }

    /// Removes unsupported values. Returns false on wipeout; the store is
    /// then left for the caller to restore.
    [[nodiscard]] virtual bool filter(DomainStore& store) const = 0;

    /// Direct check of the constraint on a full assignment indexed by VarId.
    virtual bool satisfied(std::span<const int> assignment) const = 0;

    /// True when one `filter` call always reaches the propagator's own
    /// fixpoint, so the engine need not re-run it on its own changes.
    virtual bool idempotent() const { return false; }

    virtual std::string_view name() const = 0;

private:
    std::vector<VarId> scope_;
};

}  // namespace bbcp

#endif
