// Experiment runner: `bench run`, `bench sweep`, `bench activities`.
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "bbcp/bench.hpp"

namespace {

using namespace bbcp;
using namespace bbcp::bench;

struct CommonArgs {
    std::string bench;
    std::string heur = "abs";
    std::string restart = "nr";
    double alpha = 8.0;
    double gamma = 0.999;
    double delta = 0.2;
    bool no_value_heur = false;
    int runs = 50;
    double timeout = 300.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string out;
    std::string data_dir;
    bool omit_time = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--bench", a.bench, "knap1-2..knap1-6, knap1-4-opt, msq-N, file:PATH, file-opt:PATH")
        ->required();
    cmd->add_option("--heur", a.heur, "abs | ibs | wdeg");
    cmd->add_option("--restart", a.restart, "nr | geo:RHO (also r1.1, r2)");
    cmd->add_option("--alpha", a.alpha, "smoothing for impacts and value activities");
    cmd->add_option("--gamma", a.gamma, "activity decay");
    cmd->add_option("--delta", a.delta, "probing confidence width");
    cmd->add_flag("--no-value-heur", a.no_value_heur, "ABS picks the smallest value");
    cmd->add_option("--runs", a.runs, "number of runs")->check(CLI::NonNegativeNumber);
    cmd->add_option("--timeout", a.timeout, "seconds per run")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a.seed, "seed of run 0; run i uses seed + i");
    cmd->add_option("--threads", a.threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", a.out, "CSV file (default stdout)");
    cmd->add_option("--data-dir", a.data_dir, "directory holding knapsack/");
    cmd->add_flag("--omit-time", a.omit_time, "leave time_s empty in per-run rows");
}

RunConfig to_config(const CommonArgs& a) {
    RunConfig c;
    c.bench = a.bench;
    const auto kind = parse_heuristic_kind(a.heur);
    if (!kind) throw UsageError("unknown heuristic '" + a.heur + "' (use abs, ibs, wdeg)");
    c.heuristic = *kind;
    c.params.alpha = a.alpha;
    c.params.gamma = a.gamma;
    c.params.delta = a.delta;
    c.params.value_heuristic = !a.no_value_heur;
    c.restart = parse_restart(a.restart);
    c.runs = a.runs;
    c.timeout_s = a.timeout;
    c.seed = a.seed;
    c.threads = a.threads;
    c.data_dir = a.data_dir;
    return c;
}

std::ostream& open_out(const std::string& path, std::unique_ptr<std::ofstream>& file) {
    if (path.empty() || path == "-") return std::cout;
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw std::runtime_error("cannot write " + path);
    return *file;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-box search benchmark runner"};
    app.require_subcommand(1);

    CommonArgs run_args;
    auto* run = app.add_subcommand("run", "repeated solves of one configuration");
    add_common(run, run_args);

    CommonArgs sweep_args;
    std::string param;
    std::vector<double> values;
    auto* sw = app.add_subcommand("sweep", "one experiment per parameter value");
    add_common(sw, sweep_args);
    sw->add_option("--param", param, "delta | gamma")->required();
    sw->add_option("--values", values, "comma separated values")->required()->delimiter(',');

    CommonArgs act_args;
    auto* act = app.add_subcommand("activities", "initial ABS activities after probing");
    add_common(act, act_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::unique_ptr<std::ofstream> file;
        if (run->parsed()) {
            const RunConfig config = to_config(run_args);
            const RunRecord record = run_experiment(config);
            std::ostream& out = open_out(run_args.out, file);
            write_csv_header(out);
            write_csv_rows(out, record, {run_args.omit_time});
        } else if (sw->parsed()) {
            const RunConfig config = to_config(sweep_args);
            const auto blocks = sweep(param, values, config);
            std::ostream& out = open_out(sweep_args.out, file);
            write_csv_header(out);
            for (const auto& b : blocks) write_csv_rows(out, b.record, {sweep_args.omit_time}, b.param, b.value);
        } else if (act->parsed()) {
            const RunConfig config = to_config(act_args);
            const Model model = load_benchmark(config.bench, config.data_dir);
            const auto rows = dump_activities(model, config.params, config.seed);
            write_activity_csv(open_out(act_args.out, file), rows);
        }
    } catch (const UsageError& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
