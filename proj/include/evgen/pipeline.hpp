#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/model.hpp"
#include "evgen/screening.hpp"
#include "evgen/stations.hpp"
#include "evgen/verifier.hpp"

namespace evgen {

enum class OutcomeKind { accepted, rejected_stage1, rejected_stage2, unknown_stage2 };

/// Whether Stage 2 ran: it runs only after Stage 1 passed, when enabled, and
/// only for N <= verification.max_customers.
enum class Stage2State { verified, skipped_size, not_run, disabled };

std::string_view to_string(OutcomeKind kind);
std::string_view to_string(Stage2State state);

struct GenerationDiagnostics {
    std::vector<Point> cluster_centers;
    int forced_separation_acceptances = 0;
    double max_customer_distance = 0.0;
    int midpoint_candidates = 0;
    int ray_candidates = 0;
    int truncated_stations = 0;
    int relaxed_stations = 0;
    std::vector<StationOrigin> station_origins;
};

struct GenerationOutcome {
    OutcomeKind kind = OutcomeKind::rejected_stage1;
    std::uint64_t seed = 0;
    Instance instance;
    ScreeningReport screening;
    Stage2State stage2 = Stage2State::not_run;
    std::optional<VerificationResult> verification;
    GenerationDiagnostics diagnostics;
    double elapsed_seconds = 0.0;

    bool accepted() const { return kind == OutcomeKind::accepted; }
    const GeneratorConfig& config() const { return instance.provenance->config; }
};

/// One pass of the generation procedure with a fresh generator seeded by
/// `seed`. Draw order: depot, cluster centers, customer coordinates, station
/// perturbations and top-up samples, demands, service times, and window starts
/// when randomized. All numbers are rounded to 12 significant digits before
/// screening. Throws ConfigError before any sampling when the config is
/// invalid.
GenerationOutcome generate_one(const GeneratorConfig& config, std::uint64_t seed);

/// Attempt k of a batch uses seed base + k.
inline std::uint64_t attempt_seed(std::uint64_t base, std::uint64_t k) { return base + k; }

struct BatchStats {
    int customers = 0;
    int stations = 0;
    int attempted = 0;
    int accepted = 0;
    int rejected_stage1 = 0;
    int rejected_stage2 = 0;
    int unknown_stage2 = 0;
    std::vector<double> attempt_seconds;
    std::vector<double> accepted_seconds;
    std::map<Condition, int> violations;  // attempts violating each condition
    bool underflow = false;               // attempt cap hit before the target
    bool cancelled = false;

    void record(const GenerationOutcome& outcome);
    void merge(const BatchStats& other);
    bool conserved() const {
        return accepted + rejected_stage1 + rejected_stage2 + unknown_stage2 == attempted;
    }
};

/// accepted / attempted; throws std::domain_error when nothing was attempted.
double acceptance_rate(const BatchStats& stats);

/// Mean wall-clock per accepted instance (all attempt time divided by
/// acceptances), grouped by N. Throws std::domain_error when no timing was
/// recorded.
std::map<int, double> timing_profile(std::span<const BatchStats> stats);

struct BatchOptions {
    int threads = 1;
    int attempt_cap_factor = 100;  // attempts <= factor * target
    std::function<void(const GenerationOutcome&)> on_outcome;  // every attempt, in seed order
    const std::atomic<bool>* cancel = nullptr;
    bool keep_accepted = true;
};

struct BatchResult {
    std::vector<GenerationOutcome> accepted;
    BatchStats stats;
};

/// Attempts seeds base, base+1, ... until `target_accepted` instances are
/// accepted or the attempt cap is reached (stats.underflow).
BatchResult generate_batch(const GeneratorConfig& config, int target_accepted, std::uint64_t base_seed,
                           const BatchOptions& options = {});

/// Exactly `attempts` attempts, whatever their outcome.
BatchResult run_attempts(const GeneratorConfig& config, int attempts, std::uint64_t base_seed,
                         const BatchOptions& options = {});

}  // namespace evgen
