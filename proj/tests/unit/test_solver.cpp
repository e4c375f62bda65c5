#include <doctest.h>

#include <cmath>
#include <random>

#include "bruteforce_oracle.hpp"
#include "evgen/pipeline.hpp"
#include "evgen/solver.hpp"
#include "test_support.hpp"

using namespace evgen;
using evgen::testing::CustomerRow;
using evgen::testing::make_instance;
using evgen::testing::vehicle;

namespace {

Instance station_twice() {
    CustomerRow c{{0.7, 0.5}, 0.3, 0.0, 2.0, 0.02};
    return make_instance({0.1, 0.5}, {c}, {{0.5, 0.5}}, vehicle(0.1125));
}

SolverParams quick() {
    SolverParams p;
    p.time_budget_seconds = 2.0;
    return p;
}

std::vector<Instance> accepted_instances(int count, int min_n, int max_n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<Instance> out;
    std::uint64_t s = seed * 1000;
    while (static_cast<int>(out.size()) < count) {
        auto config = evgen::testing::random_config(gen, min_n, max_n);
        config.windows.randomized_starts = false;
        set_regime(config, Regime::wide);
        config.energy.mode = BatteryMode::fixed;
        config.energy.battery = 0.1;
        auto o = generate_one(config, ++s);
        if (o.accepted()) out.push_back(std::move(o.instance));
    }
    return out;
}

}  // namespace

TEST_CASE("plan_route places stations only where needed") {
    const auto in = station_twice();
    const RoutingModel model(in);
    const std::vector<NodeId> one{1};
    const auto planned = plan_route(model, one);
    REQUIRE(planned.has_value());
    CHECK(*planned == std::vector<NodeId>{0, 2, 1, 2, 0});

    const auto near = make_instance({0.5, 0.5}, {{{0.5, 0.6}}}, {{0.9, 0.9}}, vehicle(0.1));
    const auto direct = plan_route(RoutingModel(near), one);
    REQUIRE(direct.has_value());
    CHECK(*direct == std::vector<NodeId>{0, 1, 0});

    const auto stranded = make_instance({0.1, 0.5}, {{{0.5, 0.5}}}, {{0.9, 0.5}}, vehicle(0.1));
    CHECK_FALSE(plan_route(RoutingModel(stranded), one).has_value());
}

TEST_CASE("plan_route respects capacity and windows") {
    CustomerRow a{{0.5, 0.6}, 1.0}, b{{0.5, 0.4}, 1.0};
    const auto heavy = make_instance({0.5, 0.5}, {a, b}, {}, vehicle(0.1));
    CHECK_FALSE(plan_route(RoutingModel(heavy), std::vector<NodeId>{1, 2}).has_value());

    CustomerRow early{{0.5, 0.6}, 0.1, 0.0, 0.15}, late{{0.5, 0.4}, 0.1, 0.0, 0.15};
    const auto tight = make_instance({0.5, 0.5}, {early, late}, {}, vehicle(0.1));
    CHECK_FALSE(plan_route(RoutingModel(tight), std::vector<NodeId>{1, 2}).has_value());
}

TEST_CASE("a single customer is served by one out-and-back route") {
    const auto in = make_instance({0.5, 0.5}, {{{0.5, 0.7}}}, {{0.1, 0.1}}, vehicle(0.1));
    const auto result = solve(in, quick());
    REQUIRE(result.solved());
    CHECK(result.solution->routes == std::vector<std::vector<NodeId>>{{0, 1, 0}});
    CHECK(result.solution->total_distance == doctest::Approx(0.4));
    CHECK(result.solution->ev_count == 1);
}

TEST_CASE("total demand of 2.4Q needs at least three routes") {
    std::vector<CustomerRow> customers;
    for (int i = 0; i < 6; ++i) {
        const double a = 2.0 * M_PI * i / 6.0;
        customers.push_back({{0.5 + 0.1 * std::cos(a), 0.5 + 0.1 * std::sin(a)}, 0.6});
    }
    const auto in = make_instance({0.5, 0.5}, customers, {{0.2, 0.2}}, vehicle(0.1));
    const auto result = solve(in, quick());
    REQUIRE(result.solved());
    CHECK(result.solution->ev_count >= 3);
    CHECK_NOTHROW(evaluate_solution(in, *result.solution));
}

TEST_CASE("construction fails when a customer cannot be served alone") {
    const auto in = make_instance({0.1, 0.5}, {{{0.5, 0.5}}}, {{0.9, 0.5}}, vehicle(0.1));
    const auto result = solve(in, quick());
    CHECK_FALSE(result.solved());
    CHECK(result.failure.find("customer 1") != std::string::npos);
}

TEST_CASE("evaluate_solution examples") {
    const auto in = station_twice();
    Solution empty;
    CHECK_THROWS_AS(evaluate_solution(in, empty), InvalidSolution);

    const auto good = make_solution(in, {{0, 2, 1, 2, 0}});
    const auto metrics = evaluate_solution(in, good);
    CHECK(metrics.total_distance == doctest::Approx(1.2));
    CHECK(metrics.ev_count == 1);
    REQUIRE(metrics.route_slack.size() == 1);
    CHECK(metrics.route_slack[0] == doctest::Approx(2.0 - 1.42));

    Solution tampered = good;
    tampered.routes[0] = {0, 1, 2, 0};
    try {
        evaluate_solution(in, tampered);
        FAIL("expected InvalidSolution");
    } catch (const InvalidSolution& e) {
        CHECK(e.route() == 0);
        REQUIRE(e.violation().has_value());
        CHECK(e.violation()->kind == RouteViolationKind::energy);
    }
}

TEST_CASE("two hand-built routes") {
    CustomerRow a{{0.5, 0.7}, 0.2}, b{{0.5, 0.3}, 0.2};
    const auto in = make_instance({0.5, 0.5}, {a, b}, {}, vehicle(0.1));
    const auto s = make_solution(in, {{0, 1, 0}, {0, 2, 0}, {0, 0}});
    CHECK(s.total_distance == doctest::Approx(0.8));
    CHECK(s.ev_count == 2);
    CHECK(s.traces.size() == 3);
    CHECK_THROWS_AS(make_solution(in, {{0, 1, 0}, {0, 1, 2, 0}}), InvalidSolution);
    CHECK_THROWS_AS(make_solution(in, {{0, 1, 0}}), InvalidSolution);
}

TEST_CASE("search never ends worse than the construction") {
    int solved = 0;
    for (const auto& in : accepted_instances(12, 5, 10, 3)) {
        const auto result = solve(in, quick());
        if (!result.solved()) continue;
        ++solved;
        CHECK(result.solution->total_distance <= result.initial_distance + 1e-9);
        const auto metrics = evaluate_solution(in, *result.solution);
        CHECK(metrics.total_distance == doctest::Approx(result.solution->total_distance));
        CHECK(metrics.ev_count == result.solution->ev_count);
    }
    CHECK(solved > 0);
}

TEST_CASE("solver results agree with the brute-force oracle") {
    // A solved instance is feasible with one vehicle per customer.
    std::mt19937_64 gen(5);
    int solved = 0;
    for (int k = 0; k < 40; ++k) {
        auto config = evgen::testing::random_config(gen, 1, 6);
        config.verification.enabled = false;
        if (k % 2 == 0) {
            config.energy.mode = BatteryMode::fixed;
            config.energy.battery = 0.1;
        }
        const auto in = generate_one(config, 7000 + k).instance;
        const auto result = solve(in, quick());
        if (!result.solved()) continue;
        ++solved;
        CHECK(evgen::testing::bruteforce_oracle(in, in.customer_count()).feasible);
    }
    CHECK(solved > 0);
}

TEST_CASE("solving is deterministic for a fixed seed") {
    const auto in = accepted_instances(1, 10, 10, 7).front();
    SolverParams p = quick();
    p.time_budget_seconds = 60.0;  // the iteration limits bind first
    const auto a = solve(in, p), b = solve(in, p);
    REQUIRE(a.solved());
    CHECK(a.solution->routes == b.solution->routes);
}
