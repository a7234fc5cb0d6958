#include "bbcp/model.hpp"

#include <stdexcept>

namespace bbcp {

VarId Model::add_var(int lo, int hi, std::string name) {
    domains_.emplace_back(lo, hi);
    var_names_.push_back(std::move(name));
    return VarId{static_cast<std::uint32_t>(domains_.size() - 1)};
}

VarId Model::add_var(const std::vector<int>& values, std::string name) {
    domains_.emplace_back(std::span<const int>(values));
    var_names_.push_back(std::move(name));
    return VarId{static_cast<std::uint32_t>(domains_.size() - 1)};
}

void Model::check_var(VarId x, const char* what) const {
    if (x.index >= domains_.size())
        throw std::logic_error(std::string(what) + " refers to undeclared variable " +
                               std::to_string(x.index));
}

PropagatorId Model::post(std::shared_ptr<const Propagator> p) {
    if (!p) throw std::invalid_argument("Model::post: null propagator");
    for (VarId x : p->scope()) check_var(x, "propagator scope");
    propagators_.push_back(std::move(p));
    return PropagatorId{static_cast<std::uint32_t>(propagators_.size() - 1)};
}

void Model::set_objective(Objective obj) {
    check_var(obj.var, "objective");
    objective_ = obj;
}

void Model::audit() const {
    for (std::size_t c = 0; c < propagators_.size(); ++c) {
        if (propagators_[c]->scope().empty())
            throw std::logic_error("propagator " + std::to_string(c) + " has an empty scope");
        for (VarId x : propagators_[c]->scope()) check_var(x, "propagator scope");
    }
    for (const auto& d : domains_)
        if (d.size() < 1) throw std::logic_error("empty initial domain");
    if (objective_) check_var(objective_->var, "objective");
}

bool Model::satisfied_by(std::span<const int> assignment) const {
    if (assignment.size() != domains_.size()) return false;
    for (std::size_t i = 0; i < domains_.size(); ++i)
        if (!domains_[i].contains(assignment[i])) return false;
    for (const auto& p : propagators_)
        if (!p->satisfied(assignment)) return false;
    return true;
}

}  // namespace bbcp
