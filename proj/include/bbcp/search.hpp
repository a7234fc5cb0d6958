#ifndef BBCP_SEARCH_HPP
#define BBCP_SEARCH_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bbcp/heuristics.hpp"
#include "bbcp/model.hpp"

namespace bbcp {

/// No restarts, or geometric limits l_{i+1} = ceil(rho * l_i).
struct RestartPolicy {
    enum class Mode { None, Geometric };

    Mode mode = Mode::None;
    double rho = 2.0;
    /// 0 means "3 * number of variables", resolved by `solve`.
    std::uint64_t initial_limit = 0;

    static RestartPolicy none() { return {}; }
    static RestartPolicy geometric(double rho, std::uint64_t initial_limit = 0);
};

/// Counts failures of the current round and signals when to restart.
class RestartController {
public:
    enum class Signal { Continue, RestartNow };

    explicit RestartController(RestartPolicy policy);

    /// Records one search failure. On RestartNow the next round has begun
    /// with limit ceil(rho * previous limit).
    Signal on_failure();
    std::uint64_t current_limit() const { return limit_; }
    std::uint64_t round() const { return round_; }

    static std::uint64_t next_limit(std::uint64_t limit, double rho);

private:
    RestartPolicy policy_;
    std::uint64_t limit_;
    std::uint64_t failures_ = 0;
    std::uint64_t round_ = 0;
};

enum class SearchStatus { SolutionFound, ProvedInfeasible, ProvedOptimal, TimedOut };

std::string_view to_string(SearchStatus s);

struct SolutionRecord {
    std::int64_t objective;
    double time;
};

struct SearchStats {
    std::uint64_t choice_points = 0;
    std::uint64_t failures = 0;
    std::uint64_t restarts = 0;
    std::uint64_t probes = 0;
    double wall_time = 0.0;
    SearchStatus status = SearchStatus::ProvedInfeasible;
    /// Improving incumbents in optimization mode; every solution otherwise.
    std::vector<SolutionRecord> solutions;
    /// Last solution found (indexed by VarId), empty if none.
    std::vector<int> assignment;
};

struct SearchLimits {
    double timeout_s = std::numeric_limits<double>::infinity();
    std::uint64_t max_failures = std::numeric_limits<std::uint64_t>::max();
};

struct SearchOptions {
    RestartPolicy restart;
    SearchLimits limits;
    /// Enumerate every solution (satisfaction models only; restarts are
    /// disabled in this mode).
    bool all_solutions = false;
    std::function<void(std::span<const int>)> on_solution;
};

/**
 * @brief Depth-first search with binary (x = v | x != v) branching.
 *
 * After a refutation the variable is re-selected, so dynamic scores can
 * react. With an objective the search runs branch and bound: every
 * incumbent posts a strict improvement bound that holds at every node and
 * across restarts.
 */
SearchStats solve(const Model& model, Heuristic& heuristic, const SearchOptions& options, Rng& rng);

/// Same as `solve`, for models that carry an objective.
SearchStats branch_and_bound(const Model& model, Heuristic& heuristic, const SearchOptions& options,
                             Rng& rng);

/// Root propagation plus heuristic initialization only.
struct RootReport {
    InitStatus status;
    std::vector<FiniteDomain> domains;
};
RootReport initialize_root(const Model& model, Heuristic& heuristic, Rng& rng);

}  // namespace bbcp

#endif
