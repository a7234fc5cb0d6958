#ifndef BBCP_BENCH_HPP
#define BBCP_BENCH_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbcp/heuristics.hpp"
#include "bbcp/model.hpp"
#include "bbcp/search.hpp"

namespace bbcp::bench {

/// Configuration error (unknown benchmark, bad restart spec, ...): exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    /// `knap1-2` .. `knap1-6` (decision), `knap1-4-opt` (optimization),
    /// `msq-N`, `file:PATH`, `file-opt:PATH`.
    std::string bench;
    HeuristicKind heuristic = HeuristicKind::Abs;
    HeuristicParams params;
    RestartPolicy restart;
    int runs = 50;
    double timeout_s = 300.0;
    std::uint64_t seed = 1;
    /// 0 = all hardware threads (capped by BENCH_THREADS).
    unsigned threads = 0;
    std::filesystem::path data_dir;
};

struct RunResult {
    int run_id = 0;
    std::uint64_t seed = 0;
    SearchStatus status = SearchStatus::ProvedInfeasible;
    double time_s = 0.0;
    std::uint64_t choice_points = 0;
    std::uint64_t failures = 0;
    std::uint64_t restarts = 0;
    std::optional<std::int64_t> objective;
    std::uint64_t probes = 0;
};

struct Aggregate {
    double mean_time = 0.0;
    double sd_time = 0.0;
    double mean_choice_points = 0.0;
    double mean_failures = 0.0;
    int finished = 0;
    double q1_time = 0.0;
    double median_time = 0.0;
    double q3_time = 0.0;
    double median_probes = 0.0;
};

struct RunRecord {
    RunConfig config;
    std::vector<RunResult> runs;
    Aggregate aggregate;
};

/// Parses `nr`, `r1.1`, `r2`, `geo:RHO`.
RestartPolicy parse_restart(const std::string& spec);
std::string restart_label(const RestartPolicy& policy);

/// Resolves a benchmark name to a model. Throws UsageError if unknown.
Model load_benchmark(const std::string& bench, const std::filesystem::path& data_dir);
std::filesystem::path default_data_dir();

/// Single solve of `model` with the config's heuristic, restart, timeout.
RunResult run_once(const Model& model, const RunConfig& config, int run_id);

/// Timed-out runs count as `timeout` seconds; F counts the other runs;
/// standard deviation uses the n - 1 denominator.
Aggregate aggregate(const std::vector<RunResult>& runs, double timeout_s);

/// `runs` solves with seeds seed .. seed + runs - 1, in parallel; results
/// are kept in seed order.
RunRecord run_experiment(const RunConfig& config);

struct SweepBlock {
    std::string param;
    double value;
    RunRecord record;
};

/// One experiment per value of `param` ("delta" or "gamma").
std::vector<SweepBlock> sweep(const std::string& param, const std::vector<double>& values,
                              const RunConfig& config);

struct CsvOptions {
    /// Leave time_s empty so rows of repeated runs compare byte for byte.
    bool omit_time = false;
};

void write_csv_header(std::ostream& out);
void write_csv_rows(std::ostream& out, const RunRecord& record, const CsvOptions& options = {},
                    const std::string& param = {}, std::optional<double> value = std::nullopt);

struct ActivityRow {
    VarId var;
    std::string name;
    double activity;
};

/// Runs root propagation and activity probing only and returns the initial
/// activity of every variable left unbound at the root.
std::vector<ActivityRow> dump_activities(const Model& model, const HeuristicParams& params,
                                         std::uint64_t seed);
void write_activity_csv(std::ostream& out, const std::vector<ActivityRow>& rows);

}  // namespace bbcp::bench

#endif
