#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "evgen/model.hpp"
#include "evgen/route.hpp"

namespace evgen {

struct Solution {
    std::vector<std::vector<NodeId>> routes;  // depot-anchored, stations included
    double total_distance = 0.0;
    int ev_count = 0;  // routes serving at least one customer
    std::vector<RouteTrace> traces;
};

struct SolverParams {
    int max_iterations = 200;    // shaking rounds
    int stagnation_limit = 40;   // rounds without improvement before stopping
    int tabu_tenure = 12;        // rounds a customer may not re-enter a route it left
    int neighbor_count = 10;     // granular neighbourhood: nearest customers considered per move
    int max_shake_moves = 3;
    bool relocate = true;
    bool exchange = true;
    bool two_opt_star = true;
    bool route_merge = true;
    double time_budget_seconds = 5.0;
    std::uint64_t seed = 1;
};

struct SolveResult {
    std::optional<Solution> solution;
    std::string failure;
    double initial_distance = 0.0;
    int initial_ev_count = 0;
    int iterations = 0;
    double elapsed_seconds = 0.0;

    bool solved() const { return solution.has_value(); }
};

/// Cheapest feasible station placement for a fixed customer order, or nullopt.
/// Between consecutive stops the vehicle may go direct, through one station,
/// or through two stations when neither of the first two options is
/// energy-feasible. Ties go to the lower station id.
std::optional<std::vector<NodeId>> plan_route(const RoutingModel& model, std::span<const NodeId> customers);

/// Customers in order of earliest start (then id), each placed at its cheapest
/// feasible position in any open route, or in a new route when none fits.
/// Fails when some customer cannot be served even by a route of its own.
SolveResult construct_initial(const Instance& instance);

/// Variable neighbourhood search from construct_initial. Neighbourhoods:
/// relocate, exchange, 2-opt* and route elimination, with stations re-planned
/// by plan_route after every change (this covers station insertion and
/// removal). Moves taking a customer back into a route it recently left are
/// tabu unless they beat the best solution. Only feasible solutions are ever
/// held, and the returned distance is never above the initial one.
SolveResult solve(const Instance& instance, const SolverParams& params = {});

struct SolutionMetrics {
    double total_distance = 0.0;
    int ev_count = 0;
    std::vector<double> route_slack;  // H minus return time, per route
};

class InvalidSolution : public std::runtime_error {
public:
    InvalidSolution(int route, std::optional<RouteViolation> violation, const std::string& message)
        : std::runtime_error(message), route_(route), violation_(std::move(violation)) {}
    int route() const { return route_; }
    const std::optional<RouteViolation>& violation() const { return violation_; }

private:
    int route_;
    std::optional<RouteViolation> violation_;
};

/// Re-simulates every route and checks that each customer is served exactly
/// once. Throws InvalidSolution naming the route and the broken constraint.
SolutionMetrics evaluate_solution(const Instance& instance, const Solution& solution);

/// Builds a Solution (traces, distance, ev_count) from routes, validating it.
Solution make_solution(const Instance& instance, std::vector<std::vector<NodeId>> routes);

}  // namespace evgen
