#ifndef BBCP_BENCHMARKS_HPP
#define BBCP_BENCHMARKS_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbcp/model.hpp"

namespace bbcp {

/// Multi-dimensional 0/1 knapsack data.
struct KnapsackInstance {
    std::size_t n_items = 0;
    std::size_t n_constraints = 0;
    std::vector<std::int64_t> profits;
    /// weights[i][j]: weight of item j in constraint i.
    std::vector<std::vector<std::int64_t>> weights;
    std::vector<std::int64_t> capacities;
    std::optional<std::int64_t> optimum;
    std::string name;
};

class KnapsackParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Reads the whitespace-separated instance layout:
 * `n m`, n profits, m rows of n weights, m capacities, optional optimum.
 *
 * Throws KnapsackParseError naming the offending section.
 */
KnapsackInstance parse_knapsack(std::istream& in, std::string name = {});
KnapsackInstance parse_knapsack_file(const std::filesystem::path& path);

/// Binary variables, one linear_leq per weight row, and the profit sum
/// fixed to the known optimum. Throws std::invalid_argument without an optimum.
Model build_knapsack_csp(const KnapsackInstance& inst);

/// Binary variables, one binary_knapsack_atmost per weight row, and an
/// objective variable equal to the profit sum, maximized.
Model build_knapsack_cop(const KnapsackInstance& inst);

/// n x n magic square: cells 1..n², row/column/diagonal sums, alldifferent
/// (forward checking), strict ordering along both diagonals and the
/// top-left corner below the top-right and bottom-left corners.
/// Throws std::invalid_argument for n < 3.
Model build_magic_square(int n, bool symmetry_breaking = true);

/// Variable of cell (row, col) in a model from `build_magic_square`.
inline VarId magic_cell(int n, int row, int col) {
    return VarId{static_cast<std::uint32_t>(row * n + col)};
}

std::int64_t magic_constant(int n);

// Checkers evaluate the problem definition directly on an assignment; they
// do not use any propagator.

bool check_magic_square(int n, std::span<const int> cells);
bool check_knapsack_selection(const KnapsackInstance& inst, std::span<const int> selection);
std::int64_t knapsack_profit(const KnapsackInstance& inst, std::span<const int> selection);

}  // namespace bbcp

#endif
