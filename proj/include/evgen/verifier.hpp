#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "evgen/model.hpp"
#include "evgen/search_limits.hpp"

namespace evgen {

enum class VerificationStatus { feasible, infeasible, unknown };

std::string_view to_string(VerificationStatus status);

struct VerificationResult {
    VerificationStatus status = VerificationStatus::unknown;
    std::vector<std::vector<NodeId>> witness;  // depot-anchored routes when feasible
    std::int64_t nodes_explored = 0;
    double elapsed_seconds = 0.0;
    int vehicle_limit = 0;
    int feasible_customer_sets = 0;  // distinct customer sets servable by one route
};

/// ceil(sum q / Q) + 1, capped at N (0 for an empty instance).
int default_vehicle_limit(const Instance& instance);

/// Exact feasibility decision.
///
/// Every customer must be served exactly once by at most m depot-anchored
/// routes, each leaving the depot at time 0 fully charged and obeying the
/// time-window, energy-propagation, capacity and horizon rules of
/// simulate_route. Each station may be visited max_station_visits times per
/// route and the depot only at both ends.
///
/// The search first enumerates, depth first, every customer set one route can
/// serve. Partial routes are pruned when they cannot return to the depot by H
/// even directly, when they cannot reach any charging node on the remaining
/// battery, and when another partial route at the same node with the same
/// customer set is no later, holds at least as much energy and has used no
/// more station visits. A branch-and-bound over disjoint sets then looks for a
/// partition of all customers into at most m of them.
VerificationResult verify(const Instance& instance, const SearchLimits& limits = {});

}  // namespace evgen
