#include <doctest.h>

#include <random>
#include <vector>

#include "evgen/rng.hpp"
#include "evgen/route.hpp"
#include "test_support.hpp"

using namespace evgen;
using evgen::testing::CustomerRow;
using evgen::testing::make_instance;
using evgen::testing::vehicle;

namespace {

// Depot (0.1,0.5), customer 1 at (0.7,0.5), station 2 at (0.5,0.5).
// B = 0.1125, r = 0.25, so R = 0.45.
Instance line_instance(double earliest = 0.0, double latest = 2.0) {
    CustomerRow c{{0.7, 0.5}, 0.3, earliest, latest, 0.02};
    return make_instance({0.1, 0.5}, {c}, {{0.5, 0.5}}, vehicle(0.1125));
}

}  // namespace

TEST_CASE("hand trace through a station and back") {
    const auto in = line_instance();
    const std::vector<NodeId> route{0, 2, 1, 2, 0};
    const auto sim = simulate_route(in, route);
    REQUIRE(sim.feasible());
    const auto& v = sim.trace.visits;
    REQUIRE(v.size() == 5);

    CHECK(v[1].arrival == doctest::Approx(0.4));
    CHECK(v[1].battery_arrival == doctest::Approx(0.0125));
    CHECK(v[1].dwell == doctest::Approx(0.1));
    CHECK(v[1].departure == doctest::Approx(0.5));
    CHECK(v[1].battery_departure == doctest::Approx(0.1125));

    CHECK(v[2].arrival == doctest::Approx(0.7));
    CHECK(v[2].start == doctest::Approx(0.7));
    CHECK(v[2].battery_arrival == doctest::Approx(0.0625));
    CHECK(v[2].departure == doctest::Approx(0.72));
    CHECK(v[2].load_remaining == doctest::Approx(1.2));

    CHECK(v[3].arrival == doctest::Approx(0.92));
    CHECK(v[3].dwell == doctest::Approx(0.1));
    CHECK(v[4].arrival == doctest::Approx(1.42));
    CHECK(v[4].battery_arrival == doctest::Approx(0.0125));
    CHECK(sim.trace.completion == doctest::Approx(1.42));
    CHECK(sim.trace.distance == doctest::Approx(1.2));
}

TEST_CASE("waiting for the window to open") {
    const auto in = line_instance(1.0, 1.5);
    const auto sim = simulate_route(in, std::vector<NodeId>{0, 2, 1, 2, 0});
    REQUIRE(sim.feasible());
    CHECK(sim.trace.visits[2].start == doctest::Approx(1.0));
    CHECK(sim.trace.visits[2].departure == doctest::Approx(1.02));
    CHECK(sim.trace.completion == doctest::Approx(1.72));
}

TEST_CASE("energy violation without the station") {
    const auto in = line_instance();
    const auto sim = simulate_route(in, std::vector<NodeId>{0, 1, 0});
    REQUIRE_FALSE(sim.feasible());
    CHECK(sim.violation->kind == RouteViolationKind::energy);
    CHECK(sim.violation->position == 1);
    CHECK(sim.violation->measured == doctest::Approx(-0.0375));
}

TEST_CASE("late arrival violates the window") {
    const auto in = line_instance(0.0, 0.6);
    const auto sim = simulate_route(in, std::vector<NodeId>{0, 2, 1, 2, 0});
    REQUIRE_FALSE(sim.feasible());
    CHECK(sim.violation->kind == RouteViolationKind::time_window);
    CHECK(sim.violation->node == 1);
}

TEST_CASE("capacity and horizon violations") {
    CustomerRow a{{0.5, 0.6}, 0.9}, b{{0.5, 0.4}, 0.9};
    auto in = make_instance({0.5, 0.5}, {a, b}, {}, vehicle(0.1));
    auto sim = simulate_route(in, std::vector<NodeId>{0, 1, 2, 0});
    REQUIRE_FALSE(sim.feasible());
    CHECK(sim.violation->kind == RouteViolationKind::capacity);

    in = make_instance({0.5, 0.5}, {{{0.5, 0.6}}}, {}, vehicle(0.1), 0.15);
    in.customers[0].window = {0.0, 0.15};
    sim = simulate_route(in, std::vector<NodeId>{0, 1, 0});
    REQUIRE_FALSE(sim.feasible());
    CHECK(sim.violation->kind == RouteViolationKind::horizon);
}

TEST_CASE("structural violations") {
    const auto in = line_instance();
    CHECK(simulate_route(in, std::vector<NodeId>{}).violation->kind == RouteViolationKind::structure);
    CHECK(simulate_route(in, std::vector<NodeId>{1, 0}).violation->kind == RouteViolationKind::structure);
    CHECK(simulate_route(in, std::vector<NodeId>{0, 2, 0, 2, 0}).violation->kind == RouteViolationKind::structure);
    CHECK(simulate_route(in, std::vector<NodeId>{0, 7, 0}).violation->kind == RouteViolationKind::structure);
    CHECK(simulate_route(in, std::vector<NodeId>{0, 2, 1, 1, 2, 0}).violation->kind ==
          RouteViolationKind::structure);
}

TEST_CASE("the empty route is feasible") {
    const auto sim = simulate_route(line_instance(), std::vector<NodeId>{0, 0});
    CHECK(sim.feasible());
    CHECK(sim.trace.distance == 0.0);
}

TEST_CASE("battery never exceeds B and the clock never runs backwards") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = std::uniform_int_distribution<int>(3, 8)(gen);
        Rng rng(trial + 1);
        std::vector<Point> stations{rng.uniform_point(), rng.uniform_point()};
        std::vector<CustomerRow> customers;
        for (int i = 0; i < n; ++i) customers.push_back({rng.uniform_point()});
        const auto in = make_instance(rng.uniform_point(), customers, stations, vehicle(0.2));
        std::vector<NodeId> route{0};
        for (int i = 1; i <= in.customer_count(); ++i) {
            route.push_back(i);
            if (i % 2 == 0) route.push_back(in.customer_count() + 1 + (i / 2) % 2);
        }
        route.push_back(0);
        const auto sim = simulate_route(in, route);
        double last = 0.0;
        for (const auto& v : sim.trace.visits) {
            CHECK(v.battery_departure <= in.vehicle.battery + 1e-12);
            CHECK(v.arrival >= last - 1e-12);
            CHECK(v.departure >= v.arrival);
            last = v.departure;
        }
    }
}
