#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "bbcp/heuristics.hpp"

namespace bbcp {

double assignment_impact(double log_size_before, double log_size_after, bool failed) {
    if (failed) return 1.0;
    const double impact = 1.0 - std::exp(log_size_after - log_size_before);
    return std::clamp(impact, 0.0, 1.0);
}

double smoothed_update(double previous, double sample, double alpha) {
    return (previous * (alpha - 1.0) + sample) / alpha;
}

double t_critical(int degrees_of_freedom) {
    static constexpr std::array<double, 30> kTable = {
        12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
        2.201,  2.179, 2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
        2.080,  2.074, 2.069, 2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};
    if (degrees_of_freedom < 1) throw std::invalid_argument("t_critical: df must be positive");
    if (degrees_of_freedom > 30) return 1.960;
    return kTable[degrees_of_freedom - 1];
}

// --- AssignmentStats --------------------------------------------------------

AssignmentStats::AssignmentStats(std::span<const FiniteDomain> root, double alpha)
    : alpha_(alpha) {
    if (alpha < 1.0) throw std::invalid_argument("AssignmentStats: alpha must be >= 1");
    offset_.reserve(root.size());
    span_.reserve(root.size());
    base_.reserve(root.size());
    std::size_t total = 0;
    for (const auto& d : root) {
        offset_.push_back(d.min());
        span_.push_back(d.max() - d.min() + 1);
        base_.push_back(total);
        total += static_cast<std::size_t>(span_.back());
    }
    values_.assign(total, 0.0);
    present_.assign(total, 0);
}

std::optional<std::size_t> AssignmentStats::slot(VarId x, int v) const {
    if (x.index >= offset_.size()) return std::nullopt;
    const int rel = v - offset_[x.index];
    if (rel < 0 || rel >= span_[x.index]) return std::nullopt;
    return base_[x.index] + static_cast<std::size_t>(rel);
}

std::optional<double> AssignmentStats::get(VarId x, int v) const {
    const auto s = slot(x, v);
    if (!s || !present_[*s]) return std::nullopt;
    return values_[*s];
}

double AssignmentStats::get_or(VarId x, int v, double fallback) const {
    return get(x, v).value_or(fallback);
}

void AssignmentStats::set(VarId x, int v, double value) {
    const auto s = slot(x, v);
    if (!s) throw std::out_of_range("AssignmentStats: value outside the root domain");
    if (!present_[*s]) {
        present_[*s] = 1;
        ++recorded_;
    }
    values_[*s] = value;
}

void AssignmentStats::observe(VarId x, int v, double sample) {
    const auto previous = get(x, v);
    set(x, v, previous ? smoothed_update(*previous, sample, alpha_) : sample);
}

// --- ActivityTable ----------------------------------------------------------

ActivityTable::ActivityTable(std::size_t num_vars, double decay)
    : activity_(num_vars, 0.0), decay_(decay) {
    if (decay < 0.0 || decay > 1.0) throw std::invalid_argument("ActivityTable: decay outside [0,1]");
}

ActivityTable::ActivityTable(std::span<const FiniteDomain> root, double decay, double alpha)
    : activity_(root.size(), 0.0), assignment_(std::in_place, root, alpha), decay_(decay) {
    if (decay < 0.0 || decay > 1.0) throw std::invalid_argument("ActivityTable: decay outside [0,1]");
}

void ActivityTable::on_node(std::span<const VarId> affected, const DomainStore& store) {
    for (std::uint32_t i = 0; i < activity_.size(); ++i)
        if (!store.is_bound(VarId{i})) activity_[i] *= decay_;
    for (VarId x : affected) activity_[x.index] += 1.0;
}

void ActivityTable::on_decision(VarId x, int v, std::size_t affected_count) {
    if (assignment_) assignment_->observe(x, v, static_cast<double>(affected_count));
}

std::size_t ActivityTable::size() const {
    return activity_.size() + (assignment_ ? assignment_->recorded() : 0);
}

// --- ProbeAccumulator -------------------------------------------------------

ProbeAccumulator::ProbeAccumulator(std::size_t num_vars) : mean_(num_vars, 0.0), m2_(num_vars, 0.0) {}

ProbeAccumulator::ProbeAccumulator(std::span<const FiniteDomain> root, bool track_assignments)
    : mean_(root.size(), 0.0), m2_(root.size(), 0.0) {
    if (track_assignments) {
        assignment_sum_.emplace(root, 1.0);
        assignment_count_.emplace(root, 1.0);
    }
}

void ProbeAccumulator::add_probe(std::span<const double> activity) {
    if (activity.size() != mean_.size())
        throw std::invalid_argument("ProbeAccumulator: activity vector has wrong length");
    ++count_;
    const double n = static_cast<double>(count_);
    for (std::size_t i = 0; i < mean_.size(); ++i) {
        const double delta = activity[i] - mean_[i];
        mean_[i] += delta / n;
        m2_[i] += delta * (activity[i] - mean_[i]);
    }
}

void ProbeAccumulator::observe_assignment(VarId x, int v, double activity) {
    if (!assignment_sum_) return;
    assignment_sum_->set(x, v, assignment_sum_->get_or(x, v, 0.0) + activity);
    assignment_count_->set(x, v, assignment_count_->get_or(x, v, 0.0) + 1.0);
}

std::optional<double> ProbeAccumulator::assignment_mean(VarId x, int v) const {
    if (!assignment_sum_) return std::nullopt;
    const auto n = assignment_count_->get(x, v);
    if (!n) return std::nullopt;
    return *assignment_sum_->get(x, v) / *n;
}

double ProbeAccumulator::variance(VarId x) const {
    return count_ < 2 ? 0.0 : m2_[x.index] / static_cast<double>(count_ - 1);
}

double ProbeAccumulator::stddev(VarId x) const { return std::sqrt(variance(x)); }

double ProbeAccumulator::max_relative_half_width(double eps) const {
    if (count_ < 2) return std::numeric_limits<double>::infinity();
    const double n = static_cast<double>(count_);
    const double t = t_critical(static_cast<int>(count_ - 1));
    double worst = 0.0;
    for (std::uint32_t i = 0; i < mean_.size(); ++i) {
        if (mean_[i] <= eps) continue;
        worst = std::max(worst, t * stddev(VarId{i}) / (std::sqrt(n) * mean_[i]));
    }
    return worst;
}

bool ProbeAccumulator::converged(double delta, double eps) const {
    return max_relative_half_width(eps) <= delta;
}

}  // namespace bbcp
