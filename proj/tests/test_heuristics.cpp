#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "bbcp/benchmarks.hpp"
#include "bbcp/constraints.hpp"
#include "bbcp/heuristics.hpp"
#include "bbcp/search.hpp"

using namespace bbcp;
using doctest::Approx;

namespace {

VarId v(std::uint32_t i) { return VarId{i}; }

// Counts selections over `draws` calls and checks every candidate lies
// within 5 sigma of the uniform expectation.
template <class Draw>
void check_uniform(const std::vector<int>& candidates, int draws, Draw&& draw) {
    std::map<int, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[draw()];
    const double p = 1.0 / static_cast<double>(candidates.size());
    const double mean = draws * p;
    const double sd = std::sqrt(draws * p * (1 - p));
    CHECK(counts.size() == candidates.size());
    for (int c : candidates) {
        INFO("candidate " << c << " count " << counts[c]);
        CHECK(std::abs(counts[c] - mean) <= 5 * sd);
    }
}

Model free_vars(int n, int lo, int hi) {
    Model m;
    for (int i = 0; i < n; ++i) m.add_var(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("assignment impact") {
    CHECK(assignment_impact(0.3, 0.1, true) == 1.0);
    CHECK(assignment_impact(std::log(16.0), std::log(2.0), false) == Approx(0.875).epsilon(1e-12));
    CHECK(assignment_impact(1.0, 1.0, false) == 0.0);
    CHECK(assignment_impact(1.0, 1.0 + 1e-15, false) >= 0.0);
}

TEST_CASE("smoothed impact update") {
    CHECK(smoothed_update(0.5, 0.875, 8.0) == Approx(0.546875).epsilon(1e-12));
    CHECK(smoothed_update(0.5, 0.875, 1.0) == 0.875);
    const std::vector<FiniteDomain> root{FiniteDomain(1, 3)};
    ImpactTable t(root, 8.0);
    CHECK_FALSE(t.get(v(0), 2).has_value());
    t.observe(v(0), 2, 0.5);
    CHECK(*t.get(v(0), 2) == 0.5);
    t.observe(v(0), 2, 0.875);
    CHECK(*t.get(v(0), 2) == Approx(0.546875).epsilon(1e-12));
    CHECK(t.recorded() == 1);
    CHECK(t.capacity() == 3);
    CHECK_THROWS(t.set(v(0), 9, 0.1));
}

TEST_CASE("variable impact sums over current values") {
    const Model m = free_vars(2, 1, 2);
    IbsHeuristic ibs(m, 8.0);
    for (int a : {1, 2}) {
        ibs.impacts().set(v(0), a, 0.9);
        ibs.impacts().set(v(1), a, 0.1);
    }
    DomainStore s(m.initial_domains());
    CHECK(ibs.variable_impact(v(0), s) == Approx(0.2).epsilon(1e-12));
    CHECK(ibs.variable_impact(v(1), s) == Approx(1.8).epsilon(1e-12));
    Rng rng(1);
    // The variable whose subtrees are estimated smallest is labeled first.
    CHECK(ibs.select_variable(s, rng) == v(0));
    s.assign(v(0), 1);
    CHECK(ibs.select_variable(s, rng) == v(1));
}

TEST_CASE("IBS value selection takes the least impact") {
    Model m;
    m.add_var(std::vector<int>{1, 3, 5});
    IbsHeuristic ibs(m, 8.0);
    ibs.impacts().set(v(0), 1, 0.2);
    ibs.impacts().set(v(0), 3, 0.7);
    ibs.impacts().set(v(0), 5, 0.4);
    DomainStore s(m.initial_domains());
    Rng rng(3);
    CHECK(ibs.select_value(v(0), s, rng) == 1);
    s.remove_value(v(0), 1);
    s.remove_value(v(0), 5);
    CHECK(ibs.select_value(v(0), s, rng) == 3);
}

TEST_CASE("IBS root initialization on x + y = 5") {
    Model m;
    auto x = m.add_var(0, 5), y = m.add_var(0, 5);
    m.post<LinearEq>(std::vector<LinearTerm>{{1, x}, {1, y}}, 5);
    IbsHeuristic ibs(m, 8.0);
    oracle::RecordingContext ctx(m, 1);
    REQUIRE(ctx.propagate_root());
    CHECK(ibs.initialize(ctx) == InitStatus::Ready);
    CHECK(ibs.probe_count() == 12);
    for (auto var : {x, y})
        for (int a = 0; a <= 5; ++a) CHECK(*ibs.impacts().get(var, a) == Approx(35.0 / 36.0).epsilon(1e-12));
}

TEST_CASE("IBS root initialization without constraints") {
    const Model m = free_vars(2, 0, 5);
    IbsHeuristic ibs(m, 8.0);
    oracle::RecordingContext ctx(m, 1);
    CHECK(ibs.initialize(ctx) == InitStatus::Ready);
    for (std::uint32_t i = 0; i < 2; ++i)
        for (int a = 0; a <= 5; ++a) CHECK(*ibs.impacts().get(v(i), a) == Approx(1.0 - 1.0 / 6.0).epsilon(1e-12));
    CHECK(ibs.impacts().get(v(0), 0).value() == Approx(0.8333).epsilon(1e-4));
}

TEST_CASE("IBS root initialization shaves failing values") {
    Model m;
    auto x = m.add_var(0, 4), y = m.add_var(0, 4);
    m.post<LinearEq>(std::vector<LinearTerm>{{1, x}, {2, y}}, 4);
    IbsHeuristic ibs(m, 8.0);
    oracle::RecordingContext ctx(m, 1);
    REQUIRE(ctx.propagate_root());
    CHECK(ibs.initialize(ctx) == InitStatus::Ready);
    // x must be even.
    CHECK(ctx.store()[x].values() == std::vector<int>{0, 2, 4});
    CHECK(*ibs.impacts().get(x, 1) == 1.0);
    for (double i : {*ibs.impacts().get(x, 0), *ibs.impacts().get(y, 1)}) {
        CHECK(i >= 0.0);
        CHECK(i <= 1.0);
    }
}

TEST_CASE("weighted degree ratio") {
    Model m;
    auto x = m.add_var(0, 1), y = m.add_var(0, 1), z = m.add_var(0, 0);
    const auto c1 = m.post<LinearLeq>(std::vector<LinearTerm>{{1, x}, {1, y}}, 2);
    const auto c2 = m.post<LinearLeq>(std::vector<LinearTerm>{{1, x}, {1, z}}, 2);
    WdegHeuristic w(m);
    w.weights().on_failure(c1);
    w.weights().on_failure(c1);
    w.weights().on_failure(c2);
    CHECK(w.weights().weight(c1) == 3);
    CHECK(w.weights().weight(c2) == 2);
    DomainStore s(m.initial_domains());
    CHECK(w.weighted_degree(x, s) == 3);
    const double ratio = static_cast<double>(s.size(x)) / static_cast<double>(w.weighted_degree(x, s));
    CHECK(ratio == Approx(0.6667).epsilon(1e-4));
    CHECK(w.state_size() == 2);
}

TEST_CASE("WDEG never prefers an unconstrained variable") {
    Model m;
    auto x = m.add_var(0, 1), y = m.add_var(0, 9), free = m.add_var(0, 1);
    m.post<LinearLeq>(std::vector<LinearTerm>{{1, x}, {1, y}}, 5);
    (void)free;
    WdegHeuristic w(m);
    DomainStore s(m.initial_domains());
    Rng rng(4);
    for (int i = 0; i < 200; ++i) CHECK(w.select_variable(s, rng) == x);
    CHECK(w.select_value(y, s, rng) == 0);
}

TEST_CASE("WDEG weights count failures of the search") {
    const Model m = build_magic_square(4);
    WdegHeuristic w(m);
    Rng rng(8);
    const auto stats = solve(m, w, {}, rng);
    std::int64_t extra = 0;
    for (std::uint32_t c = 0; c < m.num_propagators(); ++c) {
        CHECK(w.weights().weight(PropagatorId{c}) >= 1);
        extra += w.weights().weight(PropagatorId{c}) - 1;
    }
    CHECK(extra <= static_cast<std::int64_t>(stats.failures));
    CHECK(w.state_size() == m.num_propagators());
}

TEST_CASE("activity decay and increment") {
    const Model m = free_vars(3, 0, 3);
    DomainStore s(m.initial_domains());
    s.assign(v(2), 1);
    ActivityTable t(3, 0.999);
    t.set_activity(v(0), 10);
    t.set_activity(v(1), 10);
    t.set_activity(v(2), 10);
    const std::vector<VarId> affected{v(1)};
    t.on_node(affected, s);
    CHECK(t.activity(v(0)) == Approx(9.99).epsilon(1e-12));
    CHECK(t.activity(v(1)) == Approx(10.99).epsilon(1e-12));
    CHECK(t.activity(v(2)) == 10.0);

    ActivityTable counting(3, 1.0);
    for (int k = 0; k < 7; ++k) counting.on_node(affected, s);
    CHECK(counting.activity(v(1)) == 7.0);
}

TEST_CASE("assignment activity update") {
    const Model m = free_vars(1, 0, 3);
    ActivityTable t(m.initial_domains(), 0.999, 8.0);
    t.on_decision(v(0), 2, 4);
    CHECK(*t.assignment_stats().get(v(0), 2) == 4.0);
    t.on_decision(v(0), 2, 12);
    CHECK(*t.assignment_stats().get(v(0), 2) == Approx(5.0).epsilon(1e-12));
    ActivityTable plain(1, 0.999);
    plain.on_decision(v(0), 2, 12);
    CHECK_FALSE(plain.has_assignment_stats());
    CHECK(plain.size() == 1);
}

TEST_CASE("ABS variable selection by activity per value") {
    Model m;
    m.add_var(1, 4);
    m.add_var(1, 1);
    m.add_var(1, 2);
    AbsHeuristic abs(m, {});
    abs.table().set_activity(v(0), 8);
    abs.table().set_activity(v(1), 3);
    abs.table().set_activity(v(2), 5);
    DomainStore s(m.initial_domains());
    Rng rng(2);
    CHECK(abs.select_variable(s, rng) == v(2));
    abs.table().set_activity(v(0), 80);
    abs.table().set_activity(v(2), 50);
    CHECK(abs.select_variable(s, rng) == v(2));
}

TEST_CASE("ABS value selection") {
    Model m;
    m.add_var(std::vector<int>{2, 4, 6});
    AbsHeuristic abs(m, {});
    abs.table().assignment_stats().set(v(0), 2, 3.0);
    abs.table().assignment_stats().set(v(0), 4, 1.0);
    abs.table().assignment_stats().set(v(0), 6, 2.0);
    DomainStore s(m.initial_domains());
    Rng rng(1);
    CHECK(abs.select_value(v(0), s, rng) == 4);
    HeuristicParams no_values;
    no_values.value_heuristic = false;
    AbsHeuristic plain(m, no_values);
    CHECK(plain.select_value(v(0), s, rng) == 2);
    CHECK(plain.state_size() == 1);
}

TEST_CASE("t critical values") {
    CHECK(t_critical(1) == 12.706);
    CHECK(t_critical(10) == 2.228);
    CHECK(t_critical(30) == 2.042);
    CHECK(t_critical(31) == 1.960);
    CHECK(t_critical(100000) == 1.960);
    CHECK_THROWS(t_critical(0));
}

TEST_CASE("probe accumulator agrees with a two pass computation") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(5.0, 2.0);
    ProbeAccumulator acc(3);
    std::vector<std::vector<double>> kept;
    for (int n = 0; n < 200; ++n) {
        std::vector<double> a{noise(rng), 1e6 + noise(rng), 0.0};
        acc.add_probe(a);
        kept.push_back(a);
    }
    for (std::uint32_t i = 0; i < 3; ++i) {
        double mean = 0;
        for (const auto& a : kept) mean += a[i];
        mean /= kept.size();
        double ss = 0;
        for (const auto& a : kept) ss += (a[i] - mean) * (a[i] - mean);
        CHECK(acc.mean(v(i)) == Approx(mean).epsilon(1e-9));
        CHECK(std::abs(acc.variance(v(i)) - ss / (kept.size() - 1)) <= 1e-9 * std::max(1.0, ss));
    }
    CHECK(acc.probes() == 200);
    CHECK_THROWS(acc.add_probe(std::vector<double>{1.0}));
}

TEST_CASE("zero variance never blocks stopping") {
    ProbeAccumulator acc(2);
    for (int n = 0; n < 10; ++n) acc.add_probe(std::vector<double>{3.0, 0.0});
    CHECK(acc.max_relative_half_width() == 0.0);
    CHECK(acc.converged(0.01));
    HeuristicParams p;
    CHECK(probing_complete(acc, p));
}

TEST_CASE("probing respects the minimum and maximum probe counts") {
    ProbeAccumulator acc(1);
    HeuristicParams p;
    p.min_probes = 10;
    p.max_probes = 12;
    for (int n = 1; n <= 9; ++n) {
        acc.add_probe(std::vector<double>{1.0});
        CHECK_FALSE(probing_complete(acc, p));
    }
    acc.add_probe(std::vector<double>{1.0});
    CHECK(probing_complete(acc, p));

    ProbeAccumulator noisy(1);
    for (int n = 0; n < 12; ++n) {
        CHECK_FALSE(probing_complete(noisy, p));
        noisy.add_probe(std::vector<double>{n % 2 == 0 ? 1.0 : 100.0});
    }
    CHECK(probing_complete(noisy, p));
}

// Replays the decisions ABS made during probing and recomputes every
// per-probe activity vector from the logged affected sets.
TEST_CASE("probe activity vectors follow the affected sets") {
    const Model m = build_magic_square(3);
    HeuristicParams p;
    p.delta = 0.05;
    AbsHeuristic abs(m, p);
    oracle::RecordingContext ctx(m, 17);
    REQUIRE(ctx.propagate_root());
    std::vector<std::vector<double>> observed, expected;
    std::size_t cursor = 0;
    abs.set_probe_observer([&](std::span<const double> a) {
        observed.emplace_back(a.begin(), a.end());
        std::vector<double> ref(m.num_vars(), 0.0);
        for (; cursor < ctx.log.size(); ++cursor) {
            const auto& e = ctx.log[cursor];
            if (e.decisions.front().kind != Decision::Kind::Assign) continue;
            for (VarId x : e.result.affected) ref[x.index] += 1.0;
        }
        expected.push_back(ref);
    });
    REQUIRE(abs.initialize(ctx) != InitStatus::Infeasible);
    REQUIRE(observed.size() == abs.probe_count());
    CHECK(observed == expected);

    std::vector<double> mean(m.num_vars(), 0.0);
    for (const auto& a : observed)
        for (std::size_t i = 0; i < a.size(); ++i) mean[i] += a[i] / observed.size();
    for (std::uint32_t i = 0; i < m.num_vars(); ++i)
        CHECK(abs.table().activity(v(i)) == Approx(mean[i]).epsilon(1e-9));
}

TEST_CASE("a value failing at the first probe step is removed at the root") {
    Model m;
    auto x = m.add_var(0, 3), y = m.add_var(0, 3);
    m.post<LinearLeq>(std::vector<LinearTerm>{{1, x}, {1, y}}, 2);
    m.post<LessEqOffset>(y, x, 0);
    HeuristicParams p;
    p.min_probes = 200;
    p.max_probes = 200;
    AbsHeuristic abs(m, p);
    oracle::RecordingContext ctx(m, 5);
    REQUIRE(ctx.propagate_root());
    // Bounds reasoning keeps y = 2, but labeling it needs x >= 2 and x <= 0.
    REQUIRE(ctx.store()[y].values() == std::vector<int>{0, 1, 2});
    CHECK(abs.initialize(ctx) == InitStatus::Ready);
    CHECK(ctx.store()[y].values() == std::vector<int>{0, 1});
    CHECK(ctx.store()[x].values() == std::vector<int>{0, 1, 2});
    CHECK(ctx.solutions > 0);

    Model pig;
    std::vector<VarId> vars;
    for (int i = 0; i < 3; ++i) vars.push_back(pig.add_var(1, 2));
    pig.post<AllDifferent>(vars);
    AbsHeuristic abs2(pig, p);
    oracle::RecordingContext ctx2(pig, 5);
    REQUIRE(ctx2.propagate_root());
    CHECK(abs2.initialize(ctx2) == InitStatus::Infeasible);
}

TEST_CASE("ABS probing shaves a value whose labeling fails") {
    Model m;
    auto x = m.add_var(0, 4), y = m.add_var(0, 4);
    m.post<LinearEq>(std::vector<LinearTerm>{{1, x}, {2, y}}, 4);
    HeuristicParams p;
    p.min_probes = 300;
    p.max_probes = 300;
    AbsHeuristic abs(m, p);
    oracle::RecordingContext ctx(m, 9);
    REQUIRE(ctx.propagate_root());
    CHECK(abs.initialize(ctx) == InitStatus::Ready);
    CHECK(ctx.store()[x].values() == std::vector<int>{0, 2, 4});
}

TEST_CASE("tie breaking is uniform") {
    const Model m = free_vars(5, 0, 3);
    DomainStore s(m.initial_domains());
    const std::vector<int> vars{0, 1, 2, 3, 4};
    const std::vector<int> vals{0, 1, 2, 3};
    Rng rng(99);

    IbsHeuristic ibs(m, 8.0);
    check_uniform(vars, 10000, [&] { return static_cast<int>(ibs.select_variable(s, rng).index); });
    check_uniform(vals, 10000, [&] { return ibs.select_value(v(0), s, rng); });

    AbsHeuristic abs(m, {});
    check_uniform(vars, 10000, [&] { return static_cast<int>(abs.select_variable(s, rng).index); });
    check_uniform(vals, 10000, [&] { return abs.select_value(v(1), s, rng); });

    Model c = free_vars(4, 0, 1);
    c.post<AllDifferent>(std::vector<VarId>{v(0), v(1), v(2), v(3)});
    WdegHeuristic w(c);
    DomainStore cs(c.initial_domains());
    check_uniform({0, 1, 2, 3}, 10000, [&] { return static_cast<int>(w.select_variable(cs, rng).index); });
}

TEST_CASE("state sizes") {
    const Model m = build_magic_square(4);
    HeuristicParams p;
    p.value_heuristic = false;
    AbsHeuristic abs(m, p);
    Rng rng(1);
    solve(m, abs, {}, rng);
    CHECK(abs.state_size() == m.num_vars());
    WdegHeuristic w(m);
    solve(m, w, {}, rng);
    CHECK(w.state_size() == m.num_propagators());
}

TEST_CASE("heuristic names round trip") {
    for (auto k : {HeuristicKind::Abs, HeuristicKind::Ibs, HeuristicKind::Wdeg})
        CHECK(parse_heuristic_kind(to_string(k)) == k);
    CHECK_FALSE(parse_heuristic_kind("dom").has_value());
}
