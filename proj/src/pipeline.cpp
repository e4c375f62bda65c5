#include "evgen/pipeline.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "evgen/attributes.hpp"
#include "evgen/rng.hpp"
#include "evgen/spatial.hpp"

namespace evgen {

std::string_view to_string(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::accepted: return "accepted";
        case OutcomeKind::rejected_stage1: return "rejected_stage1";
        case OutcomeKind::rejected_stage2: return "rejected_stage2";
        case OutcomeKind::unknown_stage2: return "unknown_stage2";
    }
    return "?";
}

std::string_view to_string(Stage2State state) {
    switch (state) {
        case Stage2State::verified: return "verified";
        case Stage2State::skipped_size: return "skipped";
        case Stage2State::not_run: return "not_run";
        case Stage2State::disabled: return "disabled";
    }
    return "?";
}

namespace {

Point quantized(Point p) { return {quantize(p.x), quantize(p.y)}; }

Instance assemble(const GeneratorConfig& config, Point depot, const std::vector<Point>& customers, double battery,
                  const Infrastructure& infra, const std::vector<double>& demands,
                  const std::vector<double>& services, const std::vector<TimeWindow>& windows) {
    Instance in;
    in.depot = {0, NodeKind::depot, quantized(depot)};
    for (std::size_t i = 0; i < customers.size(); ++i) {
        Customer c;
        c.node = {static_cast<NodeId>(i + 1), NodeKind::customer, quantized(customers[i])};
        c.demand = quantize(demands[i]);
        c.service = quantize(services[i]);
        c.window = {quantize(windows[i].earliest), quantize(windows[i].latest)};
        in.customers.push_back(c);
    }
    for (const auto& s : infra.stations) in.stations.push_back({s.id, NodeKind::station, quantized(s.position)});
    in.vehicle = {quantize(config.vehicle.capacity), quantize(battery), quantize(config.vehicle.consumption),
                  quantize(config.vehicle.charge_rate)};
    in.temporal = {quantize(config.windows.horizon), quantize(config.windows.width_fraction)};
    return in;
}

}  // namespace

GenerationOutcome generate_one(const GeneratorConfig& config, std::uint64_t seed) {
    validate(config);
    const auto start = std::chrono::steady_clock::now();

    GenerationOutcome out;
    out.seed = seed;
    Rng rng(seed);

    const Point depot = place_depot(config.spatial, rng);
    CustomerLayout layout = sample_customers(config.spatial, rng);

    const double battery = adaptive_battery(layout.points, config.vehicle.consumption, config.energy);
    const double range = battery / config.vehicle.consumption;
    const Infrastructure infra = build_infrastructure(depot, layout.points, config.stations, range, rng);

    const int n = config.spatial.customers;
    const auto demands = sample_demands(n, config.vehicle.capacity, rng);
    const auto services = sample_service_times(n, config.service.min_service, config.service.max_service, rng);
    const auto windows =
        config.windows.randomized_starts
            ? sample_time_windows(n, config.windows.horizon, config.windows.width_fraction, rng)
            : assign_time_windows(n, config.windows.horizon, config.windows.width_fraction);

    out.instance = assemble(config, depot, layout.points, battery, infra, demands, services, windows);
    out.instance.provenance = Provenance{seed, config};

    auto& diag = out.diagnostics;
    diag.cluster_centers = std::move(layout.centers);
    diag.forced_separation_acceptances = layout.forced_acceptances;
    diag.max_customer_distance = max_pairwise_distance(layout.points);
    diag.midpoint_candidates = infra.midpoint_candidates;
    diag.ray_candidates = infra.ray_candidates;
    diag.truncated_stations = infra.truncated;
    diag.relaxed_stations = infra.relaxed;
    diag.station_origins = infra.origins;

    out.screening = screen(out.instance);
    if (!out.screening.passed()) {
        out.kind = OutcomeKind::rejected_stage1;
        out.stage2 = Stage2State::not_run;
    } else if (!config.verification.enabled) {
        out.kind = OutcomeKind::accepted;
        out.stage2 = Stage2State::disabled;
    } else if (n > config.verification.max_customers) {
        out.kind = OutcomeKind::accepted;
        out.stage2 = Stage2State::skipped_size;
    } else {
        out.stage2 = Stage2State::verified;
        out.verification = verify(out.instance, config.verification.limits);
        switch (out.verification->status) {
            case VerificationStatus::feasible: out.kind = OutcomeKind::accepted; break;
            case VerificationStatus::infeasible: out.kind = OutcomeKind::rejected_stage2; break;
            case VerificationStatus::unknown: out.kind = OutcomeKind::unknown_stage2; break;
        }
    }
    out.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

void BatchStats::record(const GenerationOutcome& o) {
    ++attempted;
    switch (o.kind) {
        case OutcomeKind::accepted: ++accepted; break;
        case OutcomeKind::rejected_stage1: ++rejected_stage1; break;
        case OutcomeKind::rejected_stage2: ++rejected_stage2; break;
        case OutcomeKind::unknown_stage2: ++unknown_stage2; break;
    }
    attempt_seconds.push_back(o.elapsed_seconds);
    if (o.accepted()) accepted_seconds.push_back(o.elapsed_seconds);
    for (auto c : {Condition::energy_reachability, Condition::depot_return, Condition::station_accessibility})
        if (o.screening.violates(c)) ++violations[c];
}

void BatchStats::merge(const BatchStats& other) {
    attempted += other.attempted;
    accepted += other.accepted;
    rejected_stage1 += other.rejected_stage1;
    rejected_stage2 += other.rejected_stage2;
    unknown_stage2 += other.unknown_stage2;
    attempt_seconds.insert(attempt_seconds.end(), other.attempt_seconds.begin(), other.attempt_seconds.end());
    accepted_seconds.insert(accepted_seconds.end(), other.accepted_seconds.begin(), other.accepted_seconds.end());
    for (const auto& [c, count] : other.violations) violations[c] += count;
    underflow = underflow || other.underflow;
    cancelled = cancelled || other.cancelled;
}

double acceptance_rate(const BatchStats& stats) {
    if (stats.attempted <= 0) throw std::domain_error("acceptance rate undefined: no attempts");
    return static_cast<double>(stats.accepted) / stats.attempted;
}

std::map<int, double> timing_profile(std::span<const BatchStats> stats) {
    std::map<int, double> seconds;
    std::map<int, int> accepted;
    bool any = false;
    for (const auto& s : stats) {
        if (s.attempt_seconds.empty()) continue;
        any = true;
        seconds[s.customers] += std::accumulate(s.attempt_seconds.begin(), s.attempt_seconds.end(), 0.0);
        accepted[s.customers] += s.accepted;
    }
    if (!any) throw std::domain_error("timing profile undefined: no timing samples");
    std::map<int, double> profile;
    for (const auto& [n, total] : seconds)
        if (accepted[n] > 0) profile[n] = total / accepted[n];
    return profile;
}

namespace {

// Runs attempts in waves; outcomes are consumed strictly in seed order, so the
// result does not depend on the thread count.
BatchResult run_waves(const GeneratorConfig& config, std::uint64_t base_seed, int max_attempts, int target_accepted,
                      const BatchOptions& options) {
    validate(config);
    BatchResult result;
    result.stats.customers = config.spatial.customers;
    result.stats.stations = config.stations.target_count;

    const int threads = std::max(1, options.threads);
    const int wave = threads == 1 ? 1 : threads * 4;
    std::uint64_t next = 0;
    while (result.stats.attempted < max_attempts) {
        if (target_accepted > 0 && result.stats.accepted >= target_accepted) break;
        if (options.cancel && options.cancel->load()) {
            result.stats.cancelled = true;
            break;
        }
        const int count = std::min(wave, max_attempts - result.stats.attempted);
        std::vector<GenerationOutcome> outcomes(static_cast<std::size_t>(count));
        if (threads == 1) {
            outcomes[0] = generate_one(config, attempt_seed(base_seed, next));
        } else {
            std::vector<std::jthread> pool;
            for (int t = 0; t < threads; ++t)
                pool.emplace_back([&, t] {
                    for (int i = t; i < count; i += threads)
                        outcomes[static_cast<std::size_t>(i)] =
                            generate_one(config, attempt_seed(base_seed, next + static_cast<std::uint64_t>(i)));
                });
        }
        for (auto& o : outcomes) {
            if (target_accepted > 0 && result.stats.accepted >= target_accepted) break;
            result.stats.record(o);
            ++next;
            if (options.on_outcome) options.on_outcome(o);
            if (o.accepted() && options.keep_accepted) result.accepted.push_back(std::move(o));
        }
    }
    if (target_accepted > 0 && result.stats.accepted < target_accepted && !result.stats.cancelled)
        result.stats.underflow = true;
    return result;
}

}  // namespace

BatchResult generate_batch(const GeneratorConfig& config, int target_accepted, std::uint64_t base_seed,
                           const BatchOptions& options) {
    if (target_accepted < 1) throw std::invalid_argument("target_accepted must be at least 1");
    const int cap = std::max(1, options.attempt_cap_factor) * target_accepted;
    return run_waves(config, base_seed, cap, target_accepted, options);
}

BatchResult run_attempts(const GeneratorConfig& config, int attempts, std::uint64_t base_seed,
                         const BatchOptions& options) {
    if (attempts < 1) throw std::invalid_argument("attempts must be at least 1");
    return run_waves(config, base_seed, attempts, 0, options);
}

}  // namespace evgen
