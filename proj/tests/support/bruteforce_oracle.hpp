#pragma once

#include <vector>

#include "evgen/model.hpp"

namespace evgen::testing {

struct OracleResult {
    bool feasible = false;
    std::vector<std::vector<NodeId>> witness;
    int routable_sets = 0;  // customer subsets some single route can serve
};

/// Exhaustive reference for the exact verifier, independent of its search.
/// Enumerates every route sequence (all orders of every customer subset with
/// every station interleaving, at most `max_station_visits` per station per
/// route) using its own earliest-time simulation, then tries every partition
/// of the customers into at most `vehicle_limit` routable subsets. Throws
/// std::invalid_argument for N > 6.
OracleResult bruteforce_oracle(const Instance& instance, int vehicle_limit, int max_station_visits = 2);

/// ceil(sum q / Q) + 1, capped at N, recomputed independently.
int oracle_vehicle_limit(const Instance& instance);

}  // namespace evgen::testing
