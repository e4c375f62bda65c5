#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/model.hpp"

namespace evgen {

enum class RouteViolationKind { structure, time_window, energy, capacity, horizon };

std::string_view to_string(RouteViolationKind kind);

struct RouteViolation {
    RouteViolationKind kind = RouteViolationKind::structure;
    std::size_t position = 0;  // index in the route sequence
    NodeId node = 0;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
};

/// State after visiting route position k. `start` is the service start b_i
/// (equal to arrival for stations and the depot), `battery_arrival` is y_i.
struct Visit {
    NodeId node = 0;
    double arrival = 0.0;
    double start = 0.0;
    double departure = 0.0;
    double battery_arrival = 0.0;
    double battery_departure = 0.0;
    double dwell = 0.0;  // recharge time
    double load_remaining = 0.0;
};

struct RouteTrace {
    std::vector<Visit> visits;
    double distance = 0.0;
    double completion = 0.0;  // arrival back at the depot
};

struct RouteSimulation {
    RouteTrace trace;  // visits up to and including the failing position
    std::optional<RouteViolation> violation;

    bool feasible() const { return !violation.has_value(); }
};

/// Walks a depot-anchored node sequence. The vehicle leaves the depot at time
/// 0 with a full battery and load Q. Travel takes d_ij and costs r * d_ij of
/// energy; the battery must stay non-negative. At a customer the vehicle waits
/// until e_i, must start by l_i and drops q_i. At a station it recharges to B,
/// dwelling (B - y) / g. The route must end at the depot by H. The depot may
/// not appear in the interior and a customer may appear at most once.
RouteSimulation simulate_route(const RoutingModel& model, std::span<const NodeId> route);
RouteSimulation simulate_route(const Instance& instance, std::span<const NodeId> route);

double route_distance(const RoutingModel& model, std::span<const NodeId> route);

}  // namespace evgen
