#ifndef BBCP_MODEL_HPP
#define BBCP_MODEL_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bbcp/domain.hpp"
#include "bbcp/propagator.hpp"

namespace bbcp {

enum class Direction { Minimize, Maximize };

struct Objective {
    VarId var;
    Direction direction;
};

/**
 * @brief A CSP/COP: variables with initial domains, propagators, optional objective.
 *
 * Propagators are held through shared_ptr<const>, so copying a model is
 * cheap and copies can be solved concurrently.
 */
class Model {
public:
    Model() = default;
    explicit Model(std::string name) : name_(std::move(name)) {}

    VarId add_var(int lo, int hi, std::string name = {});
    VarId add_var(const std::vector<int>& values, std::string name = {});

    /// Registers a propagator; every scope variable must already exist.
    PropagatorId post(std::shared_ptr<const Propagator> p);

    template <class P, class... Args>
    PropagatorId post(Args&&... args) {
        return post(std::make_shared<const P>(std::forward<Args>(args)...));
    }

    void minimize(VarId x) { set_objective({x, Direction::Minimize}); }
    void maximize(VarId x) { set_objective({x, Direction::Maximize}); }

    std::size_t num_vars() const { return domains_.size(); }
    std::size_t num_propagators() const { return propagators_.size(); }
    const std::vector<FiniteDomain>& initial_domains() const { return domains_; }
    const Propagator& propagator(PropagatorId c) const { return *propagators_[c.index]; }
    const std::vector<std::shared_ptr<const Propagator>>& propagators() const { return propagators_; }
    const std::string& var_name(VarId x) const { return var_names_[x.index]; }
    const std::optional<Objective>& objective() const { return objective_; }

    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }
    std::map<std::string, std::string>& metadata() { return metadata_; }
    const std::map<std::string, std::string>& metadata() const { return metadata_; }

    /// Structural check: scopes and objective refer to declared variables.
    /// Throws std::logic_error describing the first violation.
    void audit() const;

    /// Direct evaluation of every constraint on a full assignment.
    bool satisfied_by(std::span<const int> assignment) const;

private:
    void set_objective(Objective obj);
    void check_var(VarId x, const char* what) const;

    std::string name_;
    std::vector<FiniteDomain> domains_;
    std::vector<std::string> var_names_;
    std::vector<std::shared_ptr<const Propagator>> propagators_;
    std::optional<Objective> objective_;
    std::map<std::string, std::string> metadata_;
};

}  // namespace bbcp

#endif
