#pragma once

#include <cstdint>

namespace evgen {

enum class FleetMode {
    fleet,           // up to m vehicles leave the depot at time 0
    single_vehicle,  // one route must cover every customer
};

/// Budgets and modelling knobs for exact verification.
struct SearchLimits {
    double time_budget_seconds = 10.0;
    std::int64_t node_budget = 200'000'000;
    int max_station_visits = 2;  // per station, per route
    int max_vehicles = 0;        // 0 = ceil(sum q / Q) + 1, capped at N
    FleetMode fleet = FleetMode::fleet;
};

}  // namespace evgen
