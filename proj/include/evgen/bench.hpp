#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/json_codec.hpp"
#include "evgen/pipeline.hpp"
#include "evgen/solver.hpp"

namespace evgen {

struct BenchOptions {
    GeneratorConfig base;  // family, regime, size and station count are overwritten per cell
    std::vector<int> sizes = standard_sizes();
    std::vector<Family> families{Family::random, Family::clustered, Family::mixed};
    std::vector<Regime> regimes{Regime::wide, Regime::medium, Regime::tight};
    int target_accepted = 25;  // per cell, used when attempts == 0
    int attempts = 0;          // fixed attempts per cell when positive
    std::uint64_t base_seed = 1;
    int threads = 1;
    bool with_solver = false;
    int solver_instances = 0;  // accepted instances solved per cell; 0 solves all
    SolverParams solver;
    const std::atomic<bool>* cancel = nullptr;
    std::function<void(const struct BenchCell&)> on_cell;
};

struct SolverCellMetrics {
    int attempted = 0;
    int solved = 0;
    double mean_distance = 0.0;   // over solved instances
    double mean_ev_count = 0.0;
    double mean_seconds = 0.0;
};

struct BenchCell {
    Family family = Family::random;
    Regime regime = Regime::medium;
    int customers = 0;
    int stations = 0;
    BatchStats stats;
    std::optional<SolverCellMetrics> solver;

    double gamma() const { return stats.attempted ? static_cast<double>(stats.accepted) / stats.attempted : 0.0; }
};

struct RegimeSummary {
    Family family;
    Regime regime;
    int cells = 0;
    double gamma_mean = 0.0;
    double gamma_std = 0.0;  // sample standard deviation over sizes, 0 for one cell
};

struct BenchMatrix {
    std::vector<BenchCell> cells;  // family-major, then regime, then size
    bool complete = true;
    bool with_solver = false;

    std::vector<RegimeSummary> summaries() const;
    /// Mean seconds per accepted instance by size, pooled over families and regimes.
    std::map<int, double> timing() const;
};

/// Sweeps every (family, regime, size) cell. Each cell draws seeds from the
/// same base seed, so cells differ only in their configuration. Cancellation
/// stops at the next attempt and marks the matrix incomplete.
BenchMatrix run_bench(const BenchOptions& options);

/// Percentages with one decimal, rows R/C/RC, columns wide/medium/tight.
std::string acceptance_table(const BenchMatrix& matrix);
std::string gamma_csv(const BenchMatrix& matrix);
std::string timing_csv(const BenchMatrix& matrix);
std::string solver_csv(const BenchMatrix& matrix);
json bench_to_json(const BenchMatrix& matrix);

}  // namespace evgen
