#include <doctest.h>

#include <vector>

#include "evgen/stations.hpp"

using namespace evgen;

namespace {

StationConfig exact_rules(int target = 3) {
    StationConfig rules;
    rules.target_count = target;
    rules.perturbation = 0.0;
    return rules;
}

}  // namespace

TEST_CASE("midpoint candidate for a far pair") {
    Rng rng(1);
    const std::vector<Point> customers{{0.1, 0.5}, {0.9, 0.5}};
    const auto out = candidate_midpoint_stations(customers, 0.4, 0.0, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0].x == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(out[0].y == 0.5);
}

TEST_CASE("midpoints are bit-exact without perturbation") {
    Rng rng(3);
    const std::vector<Point> customers{{0.12, 0.91}, {0.83, 0.07}, {0.05, 0.05}};
    const auto out = candidate_midpoint_stations(customers, 0.3, 0.0, rng);
    REQUIRE(out.size() == 3);
    CHECK(out[0] == Point{(0.12 + 0.83) / 2.0, (0.91 + 0.07) / 2.0});
    CHECK(out[1] == Point{(0.12 + 0.05) / 2.0, (0.91 + 0.05) / 2.0});
    CHECK(out[2] == Point{(0.83 + 0.05) / 2.0, (0.07 + 0.05) / 2.0});
}

TEST_CASE("midpoint threshold is strict") {
    Rng rng(1);
    const std::vector<Point> customers{{0.0, 0.5}, {0.4, 0.5}};
    CHECK(candidate_midpoint_stations(customers, 0.5, 0.0, rng).empty());
    CHECK(candidate_midpoint_stations(customers, 0.49, 0.0, rng).size() == 1);
}

TEST_CASE("a single customer produces no midpoint") {
    Rng rng(1);
    const std::vector<Point> customers{{0.2, 0.2}};
    CHECK(candidate_midpoint_stations(customers, 0.1, 0.0, rng).empty());
}

TEST_CASE("midpoint perturbation stays within delta and inside the square") {
    Rng rng(5);
    const std::vector<Point> customers{{0.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}};
    const auto out = candidate_midpoint_stations(customers, 0.2, 0.02, rng);
    REQUIRE(out.size() == 6);
    const std::vector<Point> mids{{0.5, 0.5}, {0.0, 0.5}, {0.5, 0.0}, {0.5, 1.0}, {1.0, 0.5}, {0.5, 0.5}};
    for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(std::abs(out[k].x - mids[k].x) <= 0.02 + 1e-15);
        CHECK(std::abs(out[k].y - mids[k].y) <= 0.02 + 1e-15);
        CHECK(out[k].x >= 0.0);
        CHECK(out[k].x <= 1.0);
        CHECK(out[k].y >= 0.0);
        CHECK(out[k].y <= 1.0);
    }
}

TEST_CASE("depot ray insertion") {
    const std::vector<Point> customers{{0.9, 0.5}};
    const auto out = candidate_depot_ray_stations({0.1, 0.5}, customers, {}, 0.45);
    REQUIRE(out.size() == 1);
    CHECK(out[0].x == doctest::Approx(0.37).epsilon(1e-12));
    CHECK(out[0].y == 0.5);
}

TEST_CASE("no ray for a customer close to the depot") {
    const std::vector<Point> customers{{0.8, 0.5}};
    // d0 = 0.3 <= 0.7 * 0.45
    CHECK(candidate_depot_ray_stations({0.5, 0.5}, customers, {}, 0.45).empty());
}

TEST_CASE("no ray when a station is already near the customer") {
    const std::vector<Point> customers{{0.9, 0.5}};
    const std::vector<Point> existing{{0.9, 0.32}};  // 0.18 = 0.4R
    CHECK(candidate_depot_ray_stations({0.1, 0.5}, customers, existing, 0.45).empty());
}

TEST_CASE("earlier ray insertions count as stations") {
    const std::vector<Point> both{{0.9, 0.5}, {0.45, 0.5}};
    const std::vector<Point> second_only{{0.45, 0.5}};
    CHECK(candidate_depot_ray_stations({0.1, 0.5}, both, {}, 0.45).size() == 1);
    CHECK(candidate_depot_ray_stations({0.1, 0.5}, second_only, {}, 0.45).size() == 1);
}

TEST_CASE("filter drops duplicates and stations crowding customers") {
    const std::vector<Point> customers{{0.5, 0.5}};
    const std::vector<Point> candidates{{0.2, 0.2}, {0.2, 0.2}, {0.53, 0.5}, {0.8, 0.8}};
    const auto kept = filter_stations(candidates, customers, 0.4);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0] == Point{0.2, 0.2});
    CHECK(kept[1] == Point{0.8, 0.8});
}

TEST_CASE("filter separation is inclusive") {
    const std::vector<Point> customers{{0.9, 0.9}};
    const std::vector<Point> candidates{{0.0, 0.5}, {0.3, 0.5}};
    CHECK(filter_stations(candidates, customers, 1.0).size() == 2);
    CHECK(filter_stations(candidates, customers, 1.01).size() == 1);
}

TEST_CASE("filter respects already kept stations") {
    const std::vector<Point> kept{{0.5, 0.5}};
    const std::vector<Point> candidates{{0.55, 0.5}, {0.9, 0.5}};
    const auto out = filter_stations(candidates, {}, 0.4, kept);
    REQUIRE(out.size() == 1);
    CHECK(out[0] == Point{0.9, 0.5});
}

TEST_CASE("top up leaves a full set alone") {
    Rng rng(1);
    const std::vector<Point> kept{{0.1, 0.1}, {0.9, 0.9}};
    const auto result = top_up_stations(kept, 2, {}, 0.4, rng);
    CHECK(result.added.empty());
    CHECK(result.relaxed == 0);
}

TEST_CASE("top up reaches the target with separated stations") {
    Rng a(42), b(42);
    const auto first = top_up_stations({}, 2, {}, 0.4, a);
    const auto second = top_up_stations({}, 2, {}, 0.4, b);
    REQUIRE(first.added.size() == 2);
    CHECK(first.relaxed == 0);
    CHECK(euclidean_distance(first.added[0], first.added[1]) >= 0.12);
    CHECK(first.added == second.added);
}

TEST_CASE("top up relaxes separation when the square is too small") {
    Rng rng(9);
    // 0.3R = 3 exceeds the square's diameter.
    const auto result = top_up_stations({}, 3, {}, 10.0, rng);
    CHECK(result.added.size() == 3);
    CHECK(result.relaxed == 2);
}

TEST_CASE("truncation keeps the stations covering the most customers") {
    // Three customers at distance 0.4 from a central depot. Midpoints at
    // (0.5,0.5), (0.3,0.7), (0.7,0.7) and rays at (0.26,0.5), (0.74,0.5),
    // (0.5,0.74) all survive the filters. (0.5,0.5) covers every customer
    // within R = 0.4, so it is picked first and the remaining picks fall back
    // to ray order.
    Rng rng(1);
    const std::vector<Point> customers{{0.1, 0.5}, {0.9, 0.5}, {0.5, 0.9}};
    const auto infra = build_infrastructure({0.5, 0.5}, customers, exact_rules(3), 0.4, rng);
    CHECK(infra.midpoint_candidates == 3);
    CHECK(infra.ray_candidates == 3);
    CHECK(infra.truncated == 3);
    CHECK(infra.relaxed == 0);
    REQUIRE(infra.stations.size() == 3);
    CHECK(infra.stations[0].position == Point{0.5, 0.5});
    CHECK(infra.stations[1].position.x == doctest::Approx(0.26).epsilon(1e-12));
    CHECK(infra.stations[1].position.y == 0.5);
    CHECK(infra.stations[2].position.x == doctest::Approx(0.74).epsilon(1e-12));
    CHECK(infra.origins == std::vector<StationOrigin>{StationOrigin::midpoint, StationOrigin::depot_ray,
                                                      StationOrigin::depot_ray});
    for (int k = 0; k < 3; ++k) {
        CHECK(infra.stations[k].id == 4 + k);
        CHECK(infra.stations[k].kind == NodeKind::station);
    }
}

TEST_CASE("coverage truncation prefers a station reaching uncovered customers") {
    // Target 2: the central midpoint covers the first three customers, so the
    // second pick must be a station within R of (0.5, 0.02).
    Rng rng(1);
    const std::vector<Point> customers{{0.1, 0.5}, {0.9, 0.5}, {0.5, 0.9}, {0.5, 0.02}};
    const auto infra = build_infrastructure({0.5, 0.5}, customers, exact_rules(2), 0.4, rng);
    REQUIRE(infra.stations.size() == 2);
    const Point d{0.5, 0.02};
    bool reaches_d = false;
    for (const auto& s : infra.stations) reaches_d = reaches_d || euclidean_distance(s.position, d) <= 0.4;
    CHECK(reaches_d);
}

TEST_CASE("top up fills in when the rules under-produce") {
    Rng rng(4);
    const std::vector<Point> customers{{0.5, 0.6}, {0.55, 0.5}, {0.45, 0.45}, {0.6, 0.55}, {0.4, 0.6}};
    const auto infra = build_infrastructure({0.5, 0.5}, customers, exact_rules(2), 0.4, rng);
    CHECK(infra.midpoint_candidates == 0);
    CHECK(infra.ray_candidates == 0);
    REQUIRE(infra.stations.size() == 2);
    CHECK(infra.origins == std::vector<StationOrigin>{StationOrigin::top_up, StationOrigin::top_up});
    CHECK(infra.stations[0].id == 6);
}

TEST_CASE("target zero yields no stations") {
    Rng rng(4);
    const std::vector<Point> customers{{0.1, 0.1}, {0.9, 0.9}};
    CHECK(build_infrastructure({0.5, 0.5}, customers, exact_rules(0), 0.3, rng).stations.empty());
}

TEST_CASE("random layouts keep the placement invariants") {
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        Rng rng(seed);
        const int n = 2 + static_cast<int>(seed % 30);
        std::vector<Point> customers;
        for (int i = 0; i < n; ++i) customers.push_back(rng.uniform_point());
        const double range = rng.uniform(0.15, 0.4);
        StationConfig rules;
        rules.target_count = 2 + static_cast<int>(seed % 8);
        const auto infra = build_infrastructure(rng.uniform_point(), customers, rules, range, rng);
        REQUIRE(static_cast<int>(infra.stations.size()) == rules.target_count);
        CHECK(infra.origins.size() == infra.stations.size());
        for (std::size_t a = 0; a < infra.stations.size(); ++a) {
            const Point p = infra.stations[a].position;
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 1.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 1.0);
            CHECK(infra.stations[a].id == n + 1 + static_cast<int>(a));
            if (infra.relaxed > 0) continue;
            for (const Point& c : customers) CHECK(euclidean_distance(p, c) >= rules.customer_clearance);
            for (std::size_t b = a + 1; b < infra.stations.size(); ++b)
                CHECK(euclidean_distance(p, infra.stations[b].position) >= rules.station_separation * range);
        }
    }
}
