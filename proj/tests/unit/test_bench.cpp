#include <doctest.h>

#include <cmath>
#include <sstream>

#include "evgen/bench.hpp"

using namespace evgen;

namespace {

BenchOptions small_grid() {
    BenchOptions o;
    o.sizes = {5, 20};
    o.attempts = 6;
    return o;
}

int count_lines(const std::string& text) {
    int n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) ++n;
    return n;
}

}  // namespace

TEST_CASE("the grid covers every family, regime and size") {
    const auto m = run_bench(small_grid());
    CHECK(m.complete);
    REQUIRE(m.cells.size() == 18);
    CHECK(m.cells[0].family == Family::random);
    CHECK(m.cells[0].regime == Regime::wide);
    CHECK(m.cells[0].customers == 5);
    CHECK(m.cells[0].stations == 2);
    CHECK(m.cells[1].customers == 20);
    CHECK(m.cells[1].stations == 4);
    CHECK(m.cells[2].regime == Regime::medium);
    CHECK(m.cells[17].family == Family::mixed);
    CHECK(m.cells[17].regime == Regime::tight);
}

TEST_CASE("every cell conserves its attempts") {
    const auto m = run_bench(small_grid());
    for (const auto& cell : m.cells) {
        CHECK(cell.stats.attempted == 6);
        CHECK(cell.stats.conserved());
        CHECK(cell.gamma() >= 0.0);
        CHECK(cell.gamma() <= 1.0);
    }
}

TEST_CASE("bench runs are reproducible") {
    const auto a = run_bench(small_grid());
    const auto b = run_bench(small_grid());
    CHECK(gamma_csv(a) == gamma_csv(b));
    CHECK(acceptance_table(a) == acceptance_table(b));
}

TEST_CASE("regime summaries use the sample standard deviation") {
    BenchMatrix m;
    for (int k = 0; k < 3; ++k) {
        BenchCell c;
        c.family = Family::clustered;
        c.regime = Regime::tight;
        c.customers = 10 * (k + 1);
        c.stats.attempted = 10;
        c.stats.accepted = 2 * (k + 1);  // gamma 0.2, 0.4, 0.6
        m.cells.push_back(c);
    }
    const auto s = m.summaries();
    REQUIRE(s.size() == 1);
    CHECK(s[0].cells == 3);
    CHECK(s[0].gamma_mean == doctest::Approx(0.4));
    CHECK(s[0].gamma_std == doctest::Approx(0.2));
}

TEST_CASE("timing pools cells by size") {
    BenchMatrix m;
    BenchCell a, b;
    a.customers = b.customers = 10;
    a.stats.customers = b.stats.customers = 10;
    a.stats.attempt_seconds = {0.2, 0.2};
    a.stats.accepted = 1;
    b.stats.attempt_seconds = {0.2};
    b.stats.accepted = 1;
    m.cells = {a, b};
    CHECK(m.timing().at(10) == doctest::Approx(0.3));
}

TEST_CASE("reports") {
    auto options = small_grid();
    options.with_solver = true;
    options.solver_instances = 1;
    options.solver.time_budget_seconds = 0.5;
    const auto m = run_bench(options);
    CHECK(m.with_solver);

    const auto table = acceptance_table(m);
    CHECK(table.find("Wide") != std::string::npos);
    CHECK(table.find("RC") != std::string::npos);
    CHECK(table.find("+-") != std::string::npos);

    CHECK(count_lines(gamma_csv(m)) == 19);
    CHECK(gamma_csv(m).rfind("family,regime,customers,stations", 0) == 0);
    CHECK(count_lines(solver_csv(m)) == 19);

    const auto j = bench_to_json(m);
    CHECK(j["cells"].size() == 18);
    CHECK(j["complete"] == true);
    for (const auto& cell : m.cells) {
        REQUIRE(cell.solver.has_value());
        CHECK(cell.solver->attempted <= 1);
        CHECK(cell.solver->solved <= cell.solver->attempted);
    }
}

TEST_CASE("cancellation marks the matrix incomplete") {
    std::atomic<bool> cancel{true};
    auto options = small_grid();
    options.cancel = &cancel;
    const auto m = run_bench(options);
    CHECK_FALSE(m.complete);
}
