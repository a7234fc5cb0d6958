#include "bbcp/benchmarks.hpp"

#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bbcp/constraints.hpp"

namespace bbcp {

namespace {

std::int64_t read_int(std::istream& in, const std::string& section) {
    std::string token;
    if (!(in >> token)) throw KnapsackParseError("knapsack file truncated: missing " + section);
    try {
        std::size_t used = 0;
        const long long v = std::stoll(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw KnapsackParseError("knapsack file: non-integer token '" + token + "' in " + section);
    }
}

}  // namespace

KnapsackInstance parse_knapsack(std::istream& in, std::string name) {
    KnapsackInstance inst;
    inst.name = std::move(name);
    const auto n = read_int(in, "item count");
    const auto m = read_int(in, "constraint count");
    if (n < 0 || m < 0) throw KnapsackParseError("knapsack file: negative item or constraint count");
    inst.n_items = static_cast<std::size_t>(n);
    inst.n_constraints = static_cast<std::size_t>(m);
    for (std::size_t j = 0; j < inst.n_items; ++j)
        inst.profits.push_back(read_int(in, "profits (item " + std::to_string(j + 1) + ")"));
    inst.weights.assign(inst.n_constraints, {});
    for (std::size_t i = 0; i < inst.n_constraints; ++i) {
        for (std::size_t j = 0; j < inst.n_items; ++j) {
            const auto w = read_int(in, "weights (row " + std::to_string(i + 1) + ")");
            if (w < 0)
                throw KnapsackParseError("knapsack file: negative weight in row " + std::to_string(i + 1));
            inst.weights[i].push_back(w);
        }
    }
    for (std::size_t i = 0; i < inst.n_constraints; ++i)
        inst.capacities.push_back(read_int(in, "capacities (constraint " + std::to_string(i + 1) + ")"));
    std::string token;
    if (in >> token) {
        std::istringstream rest(token);
        inst.optimum = read_int(rest, "optimum");
        if (in >> token) throw KnapsackParseError("knapsack file: trailing data after optimum");
    }
    return inst;
}

KnapsackInstance parse_knapsack_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw KnapsackParseError("cannot open knapsack file " + path.string());
    return parse_knapsack(in, path.stem().string());
}

namespace {

std::vector<VarId> add_items(Model& model, const KnapsackInstance& inst) {
    std::vector<VarId> items;
    for (std::size_t j = 0; j < inst.n_items; ++j)
        items.push_back(model.add_var(0, 1, "x" + std::to_string(j + 1)));
    return items;
}

std::vector<LinearTerm> terms_of(const std::vector<VarId>& vars, std::span<const std::int64_t> coefs) {
    std::vector<LinearTerm> terms;
    for (std::size_t j = 0; j < vars.size(); ++j)
        if (coefs[j] != 0) terms.push_back({coefs[j], vars[j]});
    return terms;
}

// Posts sum(terms) <= rhs, or a constant check when every coefficient is 0.
void post_leq(Model& model, std::vector<LinearTerm> terms, std::int64_t rhs) {
    if (!terms.empty()) {
        model.post<LinearLeq>(std::move(terms), rhs);
    } else if (rhs < 0) {
        const VarId zero = model.add_var(0, 0, "zero");
        model.post<LinearLeq>(std::vector<LinearTerm>{{1, zero}}, rhs);
    }
}

void post_eq(Model& model, std::vector<LinearTerm> terms, std::int64_t rhs) {
    if (terms.empty()) {
        if (rhs == 0) return;
        const VarId zero = model.add_var(0, 0, "zero");
        terms.push_back({1, zero});
    }
    model.post<LinearEq>(std::move(terms), rhs);
}

}  // namespace

Model build_knapsack_csp(const KnapsackInstance& inst) {
    if (!inst.optimum) throw std::invalid_argument("knapsack CSP needs a known optimum");
    Model model(inst.name.empty() ? "knapsack-csp" : inst.name + "-csp");
    const auto items = add_items(model, inst);
    for (std::size_t i = 0; i < inst.n_constraints; ++i)
        post_leq(model, terms_of(items, inst.weights[i]), inst.capacities[i]);
    post_eq(model, terms_of(items, inst.profits), *inst.optimum);
    model.metadata()["optimum"] = std::to_string(*inst.optimum);
    return model;
}

Model build_knapsack_cop(const KnapsackInstance& inst) {
    Model model(inst.name.empty() ? "knapsack-cop" : inst.name + "-cop");
    const auto items = add_items(model, inst);
    for (std::size_t i = 0; i < inst.n_constraints; ++i) {
        if (inst.capacities[i] < 0) {
            post_leq(model, {}, inst.capacities[i]);
            continue;
        }
        if (!items.empty()) model.post<BinaryKnapsackAtMost>(items, inst.weights[i], inst.capacities[i]);
    }
    std::int64_t max_profit = 0;
    for (auto p : inst.profits) max_profit += std::max<std::int64_t>(p, 0);
    std::int64_t min_profit = 0;
    for (auto p : inst.profits) min_profit += std::min<std::int64_t>(p, 0);
    const VarId obj = model.add_var(static_cast<int>(min_profit), static_cast<int>(max_profit), "profit");
    auto terms = terms_of(items, inst.profits);
    terms.push_back({-1, obj});
    model.post<LinearEq>(std::move(terms), 0);
    model.maximize(obj);
    if (inst.optimum) model.metadata()["optimum"] = std::to_string(*inst.optimum);
    return model;
}

std::int64_t magic_constant(int n) { return static_cast<std::int64_t>(n) * (n * n + 1) / 2; }

Model build_magic_square(int n, bool symmetry_breaking) {
    if (n < 3) throw std::invalid_argument("magic square needs n >= 3");
    Model model("msq-" + std::to_string(n));
    std::vector<VarId> cells;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            cells.push_back(model.add_var(1, n * n, "c" + std::to_string(r) + "_" + std::to_string(c)));
    const std::int64_t total = magic_constant(n);
    auto sum_eq = [&](auto&& cell_of) {
        std::vector<LinearTerm> terms;
        for (int k = 0; k < n; ++k) terms.push_back({1, cell_of(k)});
        model.post<LinearEq>(std::move(terms), total);
    };
    for (int r = 0; r < n; ++r) sum_eq([&](int k) { return magic_cell(n, r, k); });
    for (int c = 0; c < n; ++c) sum_eq([&](int k) { return magic_cell(n, k, c); });
    sum_eq([&](int k) { return magic_cell(n, k, k); });
    sum_eq([&](int k) { return magic_cell(n, k, n - 1 - k); });
    model.post<AllDifferent>(cells);
    if (symmetry_breaking) {
        for (int k = 0; k + 1 < n; ++k) {
            model.post<LessEqOffset>(magic_cell(n, k, k), magic_cell(n, k + 1, k + 1), 1);
            model.post<LessEqOffset>(magic_cell(n, k, n - 1 - k), magic_cell(n, k + 1, n - 2 - k), 1);
        }
        model.post<LessEqOffset>(magic_cell(n, 0, 0), magic_cell(n, n - 1, 0), 1);
        model.post<LessEqOffset>(magic_cell(n, 0, 0), magic_cell(n, 0, n - 1), 1);
    }
    model.metadata()["n"] = std::to_string(n);
    return model;
}

bool check_magic_square(int n, std::span<const int> cells) {
    if (n < 1 || cells.size() < static_cast<std::size_t>(n * n)) return false;
    const std::int64_t total = magic_constant(n);
    std::set<int> seen;
    for (int i = 0; i < n * n; ++i) {
        if (cells[i] < 1 || cells[i] > n * n) return false;
        seen.insert(cells[i]);
    }
    if (static_cast<int>(seen.size()) != n * n) return false;
    std::int64_t d1 = 0, d2 = 0;
    for (int r = 0; r < n; ++r) {
        std::int64_t row = 0, col = 0;
        for (int c = 0; c < n; ++c) {
            row += cells[r * n + c];
            col += cells[c * n + r];
        }
        if (row != total || col != total) return false;
        d1 += cells[r * n + r];
        d2 += cells[r * n + (n - 1 - r)];
    }
    return d1 == total && d2 == total;
}

bool check_knapsack_selection(const KnapsackInstance& inst, std::span<const int> selection) {
    if (selection.size() < inst.n_items) return false;
    for (std::size_t j = 0; j < inst.n_items; ++j)
        if (selection[j] != 0 && selection[j] != 1) return false;
    for (std::size_t i = 0; i < inst.n_constraints; ++i) {
        std::int64_t load = 0;
        for (std::size_t j = 0; j < inst.n_items; ++j) load += inst.weights[i][j] * selection[j];
        if (load > inst.capacities[i]) return false;
    }
    return true;
}

std::int64_t knapsack_profit(const KnapsackInstance& inst, std::span<const int> selection) {
    std::int64_t total = 0;
    for (std::size_t j = 0; j < inst.n_items; ++j) total += inst.profits[j] * selection[j];
    return total;
}

}  // namespace bbcp
