#include <doctest.h>

#include <atomic>
#include <random>

#include "evgen/instance_io.hpp"
#include "evgen/pipeline.hpp"
#include "test_support.hpp"

using namespace evgen;

namespace {

GeneratorConfig sized(int n, Family family, Regime regime) {
    GeneratorConfig c;
    c.spatial.customers = n;
    c.spatial.family = family;
    c.stations.target_count = default_station_count(n);
    set_regime(c, regime);
    return c;
}

}  // namespace

TEST_CASE("same config and seed give the same instance") {
    std::mt19937_64 gen(3);
    for (int k = 0; k < 30; ++k) {
        const auto config = evgen::testing::random_config(gen, 1, 30);
        const auto a = generate_one(config, 100 + k);
        const auto b = generate_one(config, 100 + k);
        CHECK(a.kind == b.kind);
        CHECK(same_problem(a.instance, b.instance));
        CHECK(write_instance_text(a.instance) == write_instance_text(b.instance));
        CHECK(metadata_json(a).dump() == metadata_json(b).dump());
    }
}

TEST_CASE("different seeds give different instances") {
    const auto config = sized(10, Family::random, Regime::medium);
    CHECK_FALSE(same_problem(generate_one(config, 1).instance, generate_one(config, 2).instance));
}

TEST_CASE("generated instances respect the model") {
    std::mt19937_64 gen(4);
    for (int k = 0; k < 60; ++k) {
        const auto config = evgen::testing::random_config(gen, 1, 60);
        const auto out = generate_one(config, 7 + k);
        const auto& in = out.instance;
        CHECK_FALSE(check_instance(in).has_value());
        CHECK(in.customer_count() == config.spatial.customers);
        CHECK(in.station_count() == config.stations.target_count);
        CHECK(in.total_demand() <= 3.0 * config.vehicle.capacity + 1e-9);
        const double range = in.vehicle.range();
        CHECK(range >= config.energy.min_range - 1e-9);
        CHECK(range <= config.energy.max_range + 1e-9);
        for (const auto& c : in.customers)
            CHECK(c.window.latest - c.window.earliest ==
                  doctest::Approx(config.windows.width_fraction * config.windows.horizon).epsilon(1e-9));
        CHECK(out.instance.provenance->seed == 7u + k);
    }
}

TEST_CASE("stage 2 is skipped above the size gate") {
    const auto config = sized(20, Family::clustered, Regime::wide);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto out = generate_one(config, seed);
        if (out.kind == OutcomeKind::rejected_stage1) {
            CHECK(out.stage2 == Stage2State::not_run);
            continue;
        }
        CHECK(out.kind == OutcomeKind::accepted);
        CHECK(out.stage2 == Stage2State::skipped_size);
        CHECK_FALSE(out.verification.has_value());
        CHECK(feasibility_status(out) == "unverified");
    }
}

TEST_CASE("depot return failures are rejected by stage 1 without verification") {
    auto config = sized(5, Family::random, Regime::tight);
    config.windows.randomized_starts = true;
    config.spatial.depot_mode = DepotMode::random;
    int seen = 0;
    for (std::uint64_t seed = 1; seed <= 400 && seen < 5; ++seed) {
        const auto out = generate_one(config, seed);
        if (!out.screening.violates(Condition::depot_return)) continue;
        ++seen;
        CHECK(out.kind == OutcomeKind::rejected_stage1);
        CHECK(out.stage2 == Stage2State::not_run);
        CHECK_FALSE(out.verification.has_value());
    }
    CHECK(seen == 5);
}

TEST_CASE("outcome kind follows the stage results") {
    std::mt19937_64 gen(5);
    for (int k = 0; k < 80; ++k) {
        const auto config = evgen::testing::random_config(gen, 2, 8);
        const auto out = generate_one(config, 900 + k);
        if (!out.screening.passed()) {
            CHECK(out.kind == OutcomeKind::rejected_stage1);
        } else {
            REQUIRE(out.verification.has_value());
            CHECK(out.stage2 == Stage2State::verified);
            CHECK(out.accepted() == (out.verification->status == VerificationStatus::feasible));
        }
    }
}

TEST_CASE("disabled verification accepts on stage 1") {
    auto config = sized(5, Family::clustered, Regime::wide);
    config.verification.enabled = false;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto out = generate_one(config, seed);
        if (out.screening.passed()) {
            CHECK(out.accepted());
            CHECK(out.stage2 == Stage2State::disabled);
        }
    }
}

TEST_CASE("invalid configs throw before sampling") {
    auto config = sized(5, Family::random, Regime::wide);
    config.windows.width_fraction = 1.5;
    CHECK_THROWS_AS(generate_one(config, 1), ConfigError);
    CHECK_THROWS_AS(generate_batch(config, 1, 1), ConfigError);
}

TEST_CASE("batches conserve attempts and stop at the target") {
    const auto config = sized(10, Family::clustered, Regime::wide);
    const auto result = generate_batch(config, 3, 1);
    const auto& s = result.stats;
    CHECK(s.conserved());
    CHECK(s.accepted == 3);
    CHECK(result.accepted.size() == 3);
    CHECK_FALSE(s.underflow);
    CHECK(s.attempt_seconds.size() == static_cast<std::size_t>(s.attempted));
    CHECK(s.accepted_seconds.size() == 3);
    for (std::size_t k = 1; k < result.accepted.size(); ++k)
        CHECK(result.accepted[k].seed > result.accepted[k - 1].seed);
}

TEST_CASE("batch results do not depend on the thread count") {
    const auto config = sized(8, Family::mixed, Regime::wide);
    BatchOptions four;
    four.threads = 4;
    const auto a = generate_batch(config, 3, 50);
    const auto b = generate_batch(config, 3, 50, four);
    CHECK(a.stats.attempted == b.stats.attempted);
    REQUIRE(a.accepted.size() == b.accepted.size());
    for (std::size_t k = 0; k < a.accepted.size(); ++k) CHECK(a.accepted[k].seed == b.accepted[k].seed);
}

TEST_CASE("attempt cap marks underflow") {
    auto config = sized(10, Family::random, Regime::tight);
    BatchOptions opts;
    opts.attempt_cap_factor = 1;
    const auto result = generate_batch(config, 5, 1, opts);
    CHECK(result.stats.attempted <= 5);
    CHECK(result.stats.conserved());
    if (result.stats.accepted < 5) CHECK(result.stats.underflow);
}

TEST_CASE("cancellation stops a batch") {
    std::atomic<bool> cancel{true};
    BatchOptions opts;
    opts.cancel = &cancel;
    const auto result = run_attempts(sized(10, Family::random, Regime::wide), 10, 1, opts);
    CHECK(result.stats.cancelled);
    CHECK(result.stats.attempted == 0);
    CHECK_FALSE(result.stats.underflow);
}

TEST_CASE("run_attempts runs exactly the requested attempts") {
    const auto result = run_attempts(sized(20, Family::mixed, Regime::medium), 12, 1);
    CHECK(result.stats.attempted == 12);
    CHECK(result.stats.conserved());
    CHECK_THROWS_AS(run_attempts(sized(20, Family::mixed, Regime::medium), 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_batch(sized(20, Family::mixed, Regime::medium), 0, 1), std::invalid_argument);
}

TEST_CASE("acceptance rate") {
    BatchStats s;
    CHECK_THROWS_AS(acceptance_rate(s), std::domain_error);
    s.attempted = 8;
    s.accepted = 2;
    CHECK(acceptance_rate(s) == 0.25);
}

TEST_CASE("timing profile divides attempt time by acceptances") {
    BatchStats a, b, c;
    a.customers = 10;
    a.attempt_seconds = {0.1, 0.2, 0.3};
    a.accepted = 1;
    b.customers = 10;
    b.attempt_seconds = {0.4};
    b.accepted = 1;
    c.customers = 20;
    c.attempt_seconds = {0.5};
    c.accepted = 0;
    const std::vector<BatchStats> all{a, b, c};
    const auto profile = timing_profile(all);
    CHECK(profile.at(10) == doctest::Approx(0.5));
    CHECK(profile.count(20) == 0);
    CHECK_THROWS_AS(timing_profile(std::vector<BatchStats>{BatchStats{}}), std::domain_error);
}

TEST_CASE("merging stats adds counts") {
    BatchStats a, b;
    a.attempted = 3;
    a.accepted = 1;
    a.rejected_stage1 = 2;
    a.violations[Condition::depot_return] = 2;
    b.attempted = 2;
    b.rejected_stage2 = 1;
    b.unknown_stage2 = 1;
    b.violations[Condition::depot_return] = 1;
    b.underflow = true;
    a.merge(b);
    CHECK(a.attempted == 5);
    CHECK(a.conserved());
    CHECK(a.violations[Condition::depot_return] == 3);
    CHECK(a.underflow);
}
