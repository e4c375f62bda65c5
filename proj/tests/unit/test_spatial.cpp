#include <doctest.h>

#include <cmath>

#include "evgen/config.hpp"
#include "evgen/rng.hpp"
#include "evgen/spatial.hpp"

using namespace evgen;

TEST_CASE("depot placement modes") {
    Rng rng(1);
    SpatialConfig c;
    c.depot_mode = DepotMode::center;
    CHECK(place_depot(c, rng) == Point{0.5, 0.5});

    c.depot_mode = DepotMode::user;
    c.user_depot = {0.2, 0.3};
    CHECK(place_depot(c, rng) == Point{0.2, 0.3});

    c.user_depot = {1.2, 0.3};
    CHECK_THROWS_AS(place_depot(c, rng), ConfigError);

    c.depot_mode = DepotMode::random;
    Rng a(9), b(9);
    const Point p = place_depot(c, a);
    CHECK(p == place_depot(c, b));
    CHECK(in_unit_square(p));
}

TEST_CASE("random customers: single point needs no separation check") {
    Rng rng(3);
    const auto layout = sample_customers_random(1, 0.04, rng);
    REQUIRE(layout.points.size() == 1);
    CHECK(layout.forced_acceptances == 0);
    CHECK(in_unit_square(layout.points[0]));
}

TEST_CASE("random customers: every point is separated or counted as forced") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        Rng rng(seed);
        // A large d_min forces plenty of exhausted attempts.
        const double d_min = seed % 2 ? 0.04 : 0.3;
        const auto layout = sample_customers_random(40, d_min, rng);
        REQUIRE(layout.points.size() == 40);
        int violating = 0;
        for (std::size_t i = 1; i < layout.points.size(); ++i) {
            bool close = false;
            for (std::size_t j = 0; j < i; ++j)
                close = close || euclidean_distance(layout.points[i], layout.points[j]) < d_min;
            violating += close;
        }
        CHECK(violating <= layout.forced_acceptances);
        if (d_min == 0.3) CHECK(layout.forced_acceptances > 0);
    }
}

TEST_CASE("random customers: exhausting attempts consumes exactly that many draws") {
    // With d_min larger than the square's diagonal every draw is rejected, so
    // the second point is the 10th draw after the first.
    Rng rng(77), replay(77);
    const auto layout = sample_customers_random(2, 2.0, rng);
    CHECK(layout.forced_acceptances == 1);
    const Point first = replay.uniform_point();
    Point last;
    for (int k = 0; k < 10; ++k) last = replay.uniform_point();
    CHECK(layout.points[0] == first);
    CHECK(layout.points[1] == last);
}

TEST_CASE("random customers are reproducible") {
    Rng a(2024), b(2024);
    const auto x = sample_customers_random(100, 0.04, a);
    const auto y = sample_customers_random(100, 0.04, b);
    CHECK(x.points == y.points);
}

TEST_CASE("clustered customers: zero spread collapses onto the centers") {
    Rng rng(8);
    const auto layout = sample_customers_clustered(9, 3, 0.0, rng);
    REQUIRE(layout.centers.size() == 3);
    for (std::size_t i = 0; i < layout.points.size(); ++i) CHECK(layout.points[i] == layout.centers[i % 3]);
}

TEST_CASE("clustered customers: coordinates stay in the unit square") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const auto layout = sample_customers_clustered(50, 2, 0.4, rng);
        for (const auto& p : layout.points) CHECK(in_unit_square(p));
    }
}

TEST_CASE("clustered customers: empirical spread matches sigma") {
    // Only clusters whose center is at least 5 sigma inside the square are
    // used, so clipping cannot bias the estimate.
    const double sigma = 0.05;
    double sq = 0.0;
    long samples = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        Rng rng(seed);
        const auto layout = sample_customers_clustered(30, 3, sigma, rng);
        for (std::size_t i = 0; i < layout.points.size(); ++i) {
            const Point c = layout.centers[i % 3];
            if (c.x < 5 * sigma || c.x > 1 - 5 * sigma || c.y < 5 * sigma || c.y > 1 - 5 * sigma) continue;
            const Point p = layout.points[i];
            sq += (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
            samples += 2;
        }
    }
    REQUIRE(samples > 10000);
    const double estimate = std::sqrt(sq / samples);
    const double standard_error = sigma / std::sqrt(2.0 * samples);
    CHECK(std::abs(estimate - sigma) < 3 * standard_error);
}

TEST_CASE("mixed family split uses round half up") {
    CHECK(clustered_share(10, 0.5) == 5);
    CHECK(clustered_share(3, 0.5) == 2);
    CHECK(clustered_share(100, 0.99) == 99);
    CHECK(clustered_share(5, 0.5) == 3);
}

TEST_CASE("mixed customers: clustered block first, random block separated from everything") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        Rng rng(seed);
        const auto layout = sample_customers_mixed(10, 0.5, 3, 0.0, 0.04, rng);
        REQUIRE(layout.points.size() == 10);
        REQUIRE(layout.centers.size() == 3);
        for (int i = 0; i < 5; ++i) CHECK(layout.points[i] == layout.centers[i % 3]);
        int violating = 0;
        for (int i = 5; i < 10; ++i) {
            bool close = false;
            for (int j = 0; j < i; ++j) close = close || euclidean_distance(layout.points[i], layout.points[j]) < 0.04;
            violating += close;
        }
        CHECK(violating <= layout.forced_acceptances);
    }
}

TEST_CASE("sample_customers dispatches on the family") {
    SpatialConfig c;
    c.customers = 12;
    for (Family f : {Family::random, Family::clustered, Family::mixed}) {
        c.family = f;
        Rng a(5), b(5);
        const auto x = sample_customers(c, a);
        CHECK(x.points.size() == 12);
        CHECK(x.points == sample_customers(c, b).points);
        CHECK(x.centers.empty() == (f == Family::random));
    }
}
