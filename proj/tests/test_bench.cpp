#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "bbcp/bench.hpp"
#include "bbcp/benchmarks.hpp"

using namespace bbcp;
using namespace bbcp::bench;
using doctest::Approx;

namespace {

RunResult result(SearchStatus s, double t, std::uint64_t probes = 0) {
    RunResult r;
    r.status = s;
    r.time_s = t;
    r.probes = probes;
    return r;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

RunConfig small_config(const std::string& bench) {
    RunConfig c;
    c.bench = bench;
    c.runs = 4;
    c.timeout_s = 20;
    c.seed = 7;
    c.threads = 2;
    c.data_dir = BBCP_TEST_DATA;
    return c;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(BENCH_EXE) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("timed out runs count as the timeout") {
    const std::vector<RunResult> runs(3, result(SearchStatus::TimedOut, 1.0004));
    const auto a = aggregate(runs, 1.0);
    CHECK(a.mean_time == 1.0);
    CHECK(a.sd_time == 0.0);
    CHECK(a.finished == 0);
}

TEST_CASE("aggregate statistics") {
    const std::vector<RunResult> runs{result(SearchStatus::SolutionFound, 1.0, 10),
                                      result(SearchStatus::SolutionFound, 2.0, 30),
                                      result(SearchStatus::ProvedOptimal, 4.0, 20),
                                      result(SearchStatus::TimedOut, 9.5, 40)};
    const auto a = aggregate(runs, 5.0);
    CHECK(a.finished == 3);
    CHECK(a.mean_time == Approx(3.0));
    // times 1, 2, 4, 5: squared deviations 4, 1, 1, 4 over n - 1 = 3.
    CHECK(a.sd_time == Approx(std::sqrt(10.0 / 3.0)));
    CHECK(a.median_time == Approx(3.0));
    CHECK(a.q1_time == Approx(1.75));
    CHECK(a.q3_time == Approx(4.25));
    CHECK(a.median_probes == Approx(25.0));
    CHECK(aggregate({}, 5.0).finished == 0);
}

TEST_CASE("restart policy names") {
    CHECK(parse_restart("nr").mode == RestartPolicy::Mode::None);
    CHECK(parse_restart("r1.1").rho == Approx(1.1));
    CHECK(parse_restart("r2").rho == 2.0);
    CHECK(parse_restart("geo:1.5").rho == 1.5);
    CHECK(restart_label(parse_restart("geo:1.5")) == "geo:1.5");
    CHECK_THROWS_AS(parse_restart("luby"), UsageError);
    CHECK_THROWS_AS(parse_restart("geo:0.9"), UsageError);
    CHECK_THROWS_AS(parse_restart("geo:x"), UsageError);
}

TEST_CASE("benchmark names") {
    const auto dir = std::filesystem::path(BBCP_TEST_DATA);
    CHECK(load_benchmark("msq-4", dir).num_vars() == 16);
    CHECK(load_benchmark("knap1-2", dir).metadata().at("optimum") == "273");
    CHECK(load_benchmark("knap1-4-opt", dir).objective().has_value());
    CHECK(load_benchmark("file:" + (dir / "knapsack/mknap1-3.txt").string(), dir).num_vars() == 15);
    CHECK_THROWS_AS(load_benchmark("knap9-9", dir), UsageError);
    CHECK_THROWS_AS(load_benchmark("sudoku", dir), UsageError);
    CHECK_THROWS_AS(load_benchmark("msq-2", dir), UsageError);
    CHECK_THROWS_AS(load_benchmark("msq-x", dir), UsageError);
}

TEST_CASE("CSV layout and re-aggregation") {
    RunConfig c = small_config("msq-5");
    c.restart = parse_restart("geo:1.1");
    const auto record = run_experiment(c);
    std::ostringstream out;
    write_csv_header(out);
    write_csv_rows(out, record);
    const auto rows = read_csv(out.str());
    REQUIRE(rows.size() == 1 + 4 + 1);
    const auto& header = rows[0];
    CHECK(header[0] == "run_id");
    CHECK(header[7] == "objective");
    for (const auto& r : rows) CHECK(r.size() == header.size());

    double sum = 0;
    std::vector<double> times;
    for (int i = 1; i <= 4; ++i) {
        CHECK(rows[i][0] == std::to_string(i - 1));
        CHECK(rows[i][1] == std::to_string(7 + i - 1));
        CHECK(rows[i][9] == "0");
        const double t = rows[i][2] == "timeout" ? c.timeout_s : std::stod(rows[i][3]);
        times.push_back(t);
        sum += t;
    }
    const double mean = sum / 4;
    double ss = 0;
    for (double t : times) ss += (t - mean) * (t - mean);
    CHECK(rows[5][9] == "1");
    CHECK(std::abs(std::stod(rows[5][12]) - mean) <= 1e-9);
    CHECK(std::abs(std::stod(rows[5][13]) - std::sqrt(ss / 3)) <= 1e-9);
}

TEST_CASE("run order and counters do not depend on thread count") {
    RunConfig c = small_config("msq-5");
    c.heuristic = HeuristicKind::Ibs;
    c.restart = parse_restart("r1.1");
    c.threads = 1;
    const auto a = run_experiment(c);
    c.threads = 3;
    const auto b = run_experiment(c);
    std::ostringstream sa, sb;
    write_csv_rows(sa, a, {true});
    write_csv_rows(sb, b, {true});
    const auto ra = read_csv(sa.str()), rb = read_csv(sb.str());
    for (int i = 0; i < 4; ++i) CHECK(ra[i] == rb[i]);
    CHECK(a.aggregate.mean_choice_points == b.aggregate.mean_choice_points);
}

TEST_CASE("single value sweep equals a run") {
    RunConfig c = small_config("msq-4");
    const auto blocks = sweep("delta", {0.2}, c);
    REQUIRE(blocks.size() == 1);
    const auto run = run_experiment(c);
    for (std::size_t i = 0; i < run.runs.size(); ++i) {
        CHECK(blocks[0].record.runs[i].choice_points == run.runs[i].choice_points);
        CHECK(blocks[0].record.runs[i].probes == run.runs[i].probes);
    }
    CHECK_THROWS_AS(sweep("alpha", {1.0}, c), UsageError);
    const auto gammas = sweep("gamma", {0.999, 0.9, 0.5}, c);
    CHECK(gammas.size() == 3);
    CHECK(gammas[2].record.config.params.gamma == 0.5);
}

TEST_CASE("activity dump") {
    const Model m = build_magic_square(5);
    const auto rows = dump_activities(m, {}, 3);
    CHECK(rows.size() <= 25);
    CHECK(!rows.empty());
    for (const auto& r : rows) CHECK(r.activity >= 0.0);
    const auto again = dump_activities(m, {}, 3);
    REQUIRE(again.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(again[i].activity == rows[i].activity);

    std::ostringstream out;
    write_activity_csv(out, dump_activities(Model{}, {}, 1));
    CHECK(out.str() == "var,name,activity\n");
}

TEST_CASE("command line exit codes") {
    CHECK(run_cli("run --bench msq-3 --heur abs --runs 2 --timeout 5") == 0);
    CHECK(run_cli("run --bench msq-6 --heur wdeg --runs 1 --timeout 0.001") == 0);
    CHECK(run_cli("run --bench nothing --heur abs --runs 1") == 2);
    CHECK(run_cli("run --bench msq-3 --heur dom --runs 1") == 2);
    CHECK(run_cli("run --bench msq-3 --restart luby --runs 1") == 2);
    CHECK(run_cli("run --heur abs") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("activities --bench msq-4") == 0);
    CHECK(run_cli("sweep --bench msq-4 --param delta --values 0.4,0.2 --runs 2") == 0);
    CHECK(run_cli("run --bench msq-3 --runs 1 --out /nonexistent/dir/x.csv") == 1);
}
