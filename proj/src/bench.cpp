#include "bbcp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <thread>

#include "bbcp/benchmarks.hpp"

#ifndef BBCP_DATA_DIR
#define BBCP_DATA_DIR "data"
#endif

namespace bbcp::bench {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("invalid " + what + ": '" + s + "'");
}

bool starts_with(const std::string& s, const std::string& prefix) {
    return s.rfind(prefix, 0) == 0;
}

// Type-7 (linear interpolation) quantile of sorted data.
double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

unsigned worker_count(unsigned requested, int runs) {
    unsigned n = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BENCH_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0) n = std::min(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, std::min(n, static_cast<unsigned>(std::max(runs, 1))));
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace

RestartPolicy parse_restart(const std::string& spec) {
    if (spec == "nr" || spec == "none") return RestartPolicy::none();
    std::string rho;
    if (starts_with(spec, "geo:")) rho = spec.substr(4);
    else if (starts_with(spec, "r")) rho = spec.substr(1);
    else throw UsageError("unknown restart policy '" + spec + "' (use nr, geo:RHO, r1.1, r2)");
    const double value = parse_double(rho, "restart factor");
    if (!(value > 1.0)) throw UsageError("restart factor must exceed 1");
    return RestartPolicy::geometric(value);
}

std::string restart_label(const RestartPolicy& policy) {
    if (policy.mode == RestartPolicy::Mode::None) return "nr";
    return "geo:" + fmt(policy.rho);
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("BENCH_DATA")) return env;
    return BBCP_DATA_DIR;
}

Model load_benchmark(const std::string& bench, const std::filesystem::path& data_dir) {
    const auto dir = data_dir.empty() ? default_data_dir() : data_dir;
    try {
        if (starts_with(bench, "msq-")) {
            const double n = parse_double(bench.substr(4), "magic square size");
            if (n != std::floor(n)) throw UsageError("magic square size must be an integer");
            return build_magic_square(static_cast<int>(n));
        }
        if (starts_with(bench, "file-opt:")) return build_knapsack_cop(parse_knapsack_file(bench.substr(9)));
        if (starts_with(bench, "file:")) return build_knapsack_csp(parse_knapsack_file(bench.substr(5)));
        if (starts_with(bench, "knap")) {
            std::string id = bench.substr(4);
            const bool opt = id.size() > 4 && id.substr(id.size() - 4) == "-opt";
            if (opt) id.resize(id.size() - 4);
            const auto path = dir / "knapsack" / ("mknap" + id + ".txt");
            if (!std::filesystem::exists(path)) throw UsageError("unknown knapsack benchmark '" + bench + "'");
            const auto inst = parse_knapsack_file(path);
            return opt ? build_knapsack_cop(inst) : build_knapsack_csp(inst);
        }
    } catch (const KnapsackParseError& e) {
        throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown benchmark '" + bench + "'");
}

RunResult run_once(const Model& model, const RunConfig& config, int run_id) {
    RunResult result;
    result.run_id = run_id;
    result.seed = config.seed + static_cast<std::uint64_t>(run_id);
    Rng rng(result.seed);
    auto heuristic = make_heuristic(config.heuristic, model, config.params);
    SearchOptions options;
    options.restart = config.restart;
    options.limits.timeout_s = config.timeout_s;
    const SearchStats stats = solve(model, *heuristic, options, rng);
    result.status = stats.status;
    result.time_s = stats.wall_time;
    result.choice_points = stats.choice_points;
    result.failures = stats.failures;
    result.restarts = stats.restarts;
    result.probes = stats.probes;
    if (model.objective() && !stats.solutions.empty()) result.objective = stats.solutions.back().objective;
    return result;
}

Aggregate aggregate(const std::vector<RunResult>& runs, double timeout_s) {
    Aggregate agg;
    if (runs.empty()) return agg;
    std::vector<double> times;
    std::vector<double> probes;
    for (const auto& r : runs) {
        const bool timed_out = r.status == SearchStatus::TimedOut;
        times.push_back(timed_out ? timeout_s : r.time_s);
        probes.push_back(static_cast<double>(r.probes));
        if (!timed_out) ++agg.finished;
        agg.mean_choice_points += static_cast<double>(r.choice_points);
        agg.mean_failures += static_cast<double>(r.failures);
    }
    const double n = static_cast<double>(runs.size());
    for (double t : times) agg.mean_time += t;
    agg.mean_time /= n;
    agg.mean_choice_points /= n;
    agg.mean_failures /= n;
    if (runs.size() > 1) {
        double ss = 0.0;
        for (double t : times) ss += (t - agg.mean_time) * (t - agg.mean_time);
        agg.sd_time = std::sqrt(ss / (n - 1.0));
    }
    std::sort(times.begin(), times.end());
    std::sort(probes.begin(), probes.end());
    agg.q1_time = quantile(times, 0.25);
    agg.median_time = quantile(times, 0.5);
    agg.q3_time = quantile(times, 0.75);
    agg.median_probes = quantile(probes, 0.5);
    return agg;
}

RunRecord run_experiment(const RunConfig& config) {
    if (config.runs < 0) throw UsageError("runs must be non-negative");
    const Model model = load_benchmark(config.bench, config.data_dir);
    RunRecord record;
    record.config = config;
    record.runs.resize(static_cast<std::size_t>(config.runs));

    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < config.runs; i = next++) record.runs[i] = run_once(model, config, i);
    };
    const unsigned n_workers = worker_count(config.threads, config.runs);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    record.aggregate = aggregate(record.runs, config.timeout_s);
    return record;
}

std::vector<SweepBlock> sweep(const std::string& param, const std::vector<double>& values,
                              const RunConfig& config) {
    if (param != "delta" && param != "gamma") throw UsageError("sweep parameter must be delta or gamma");
    std::vector<SweepBlock> blocks;
    for (double v : values) {
        RunConfig c = config;
        if (param == "delta") c.params.delta = v;
        else c.params.gamma = v;
        blocks.push_back({param, v, run_experiment(c)});
    }
    return blocks;
}

void write_csv_header(std::ostream& out) {
    out << "run_id,seed,status,time_s,choice_points,failures,restarts,objective,probes,"
           "agg,param,value,mean_time_s,sd_time_s,mean_choice_points,mean_failures,finished,"
           "q1_time_s,median_time_s,q3_time_s,median_probes\n";
}

void write_csv_rows(std::ostream& out, const RunRecord& record, const CsvOptions& options,
                    const std::string& param, std::optional<double> value) {
    const std::string value_text = value ? fmt(*value) : std::string();
    for (const auto& r : record.runs) {
        out << r.run_id << ',' << r.seed << ',' << to_string(r.status) << ','
            << (options.omit_time ? std::string() : fmt(r.time_s)) << ',' << r.choice_points << ','
            << r.failures << ',' << r.restarts << ','
            << (r.objective ? std::to_string(*r.objective) : std::string()) << ',' << r.probes << ",0,"
            << param << ',' << value_text << ",,,,,,,,,\n";
    }
    const Aggregate& a = record.aggregate;
    out << ",,,,,,,,,1," << param << ',' << value_text << ',' << fmt(a.mean_time) << ','
        << fmt(a.sd_time) << ',' << fmt(a.mean_choice_points) << ',' << fmt(a.mean_failures) << ','
        << a.finished << ',' << fmt(a.q1_time) << ',' << fmt(a.median_time) << ',' << fmt(a.q3_time)
        << ',' << fmt(a.median_probes) << '\n';
}

std::vector<ActivityRow> dump_activities(const Model& model, const HeuristicParams& params,
                                         std::uint64_t seed) {
    AbsHeuristic abs(model, params);
    Rng rng(seed);
    const RootReport root = initialize_root(model, abs, rng);
    std::vector<ActivityRow> rows;
    if (root.status == InitStatus::Infeasible) return rows;
    for (std::uint32_t i = 0; i < model.num_vars(); ++i) {
        const VarId x{i};
        if (root.domains[i].size() == 1) continue;
        rows.push_back({x, model.var_name(x), abs.table().activity(x)});
    }
    return rows;
}

void write_activity_csv(std::ostream& out, const std::vector<ActivityRow>& rows) {
    out << "var,name,activity\n";
    for (const auto& r : rows) out << r.var.index << ',' << r.name << ',' << fmt(r.activity) << '\n';
}

}  // namespace bbcp::bench
