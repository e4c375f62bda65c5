#include "evgen/route.hpp"

#include <algorithm>
#include <vector>

namespace evgen {

std::string_view to_string(RouteViolationKind kind) {
    switch (kind) {
        case RouteViolationKind::structure: return "structure";
        case RouteViolationKind::time_window: return "time_window";
        case RouteViolationKind::energy: return "energy";
        case RouteViolationKind::capacity: return "capacity";
        case RouteViolationKind::horizon: return "horizon";
    }
    return "?";
}

RouteSimulation simulate_route(const RoutingModel& model, std::span<const NodeId> route) {
    RouteSimulation sim;
    auto fail = [&](RouteViolationKind kind, std::size_t pos, NodeId node, double measured, double limit,
                    std::string detail) {
        sim.violation = RouteViolation{kind, pos, node, measured, limit, std::move(detail)};
        return sim;
    };

    if (route.size() < 2 || route.front() != 0 || route.back() != 0)
        return fail(RouteViolationKind::structure, 0, route.empty() ? 0 : route.front(), 0, 0,
                    "route must start and end at the depot");

    const auto& vehicle = model.vehicle();
    std::vector<char> seen(static_cast<std::size_t>(model.node_count()), 0);

    double time = 0.0;
    double battery = vehicle.battery;
    double load = vehicle.capacity;
    sim.trace.visits.push_back({0, 0.0, 0.0, 0.0, battery, battery, 0.0, load});

    for (std::size_t pos = 1; pos < route.size(); ++pos) {
        const NodeId from = route[pos - 1];
        const NodeId to = route[pos];
        if (!model.valid(to)) return fail(RouteViolationKind::structure, pos, to, 0, 0, "unknown node id");
        if (to == 0 && pos + 1 != route.size())
            return fail(RouteViolationKind::structure, pos, to, 0, 0, "depot inside a route");

        const double d = model.distance(from, to);
        sim.trace.distance += d;
        const double arrival = time + travel_time(d);
        const double arrive_battery = battery - vehicle.consumption * d;

        Visit visit{to, arrival, arrival, arrival, arrive_battery, arrive_battery, 0.0, load};
        sim.trace.visits.push_back(visit);
        Visit& v = sim.trace.visits.back();

        if (arrive_battery < -kTolerance)
            return fail(RouteViolationKind::energy, pos, to, arrive_battery, 0.0, "battery depleted on arrival");

        if (to == 0) {
            sim.trace.completion = arrival;
            if (arrival > model.horizon() + kTolerance)
                return fail(RouteViolationKind::horizon, pos, to, arrival, model.horizon(), "returns after H");
            return sim;
        }

        if (model.is_customer(to)) {
            if (seen[to]) return fail(RouteViolationKind::structure, pos, to, 0, 0, "customer visited twice");
            seen[to] = 1;
            v.start = std::max(arrival, model.earliest(to));
            if (v.start > model.latest(to) + kTolerance)
                return fail(RouteViolationKind::time_window, pos, to, v.start, model.latest(to),
                            "service starts after the window closes");
            load -= model.demand(to);
            v.load_remaining = load;
            if (load < -kTolerance)
                return fail(RouteViolationKind::capacity, pos, to, vehicle.capacity - load, vehicle.capacity,
                            "load capacity exceeded");
            v.departure = v.start + model.service(to);
            battery = arrive_battery;
        } else {
            v.dwell = (vehicle.battery - arrive_battery) / vehicle.charge_rate;
            v.departure = arrival + v.dwell;
            battery = vehicle.battery;
            v.battery_departure = battery;
        }
        time = v.departure;
    }
    return sim;
}

RouteSimulation simulate_route(const Instance& instance, std::span<const NodeId> route) {
    return simulate_route(RoutingModel(instance), route);
}

double route_distance(const RoutingModel& model, std::span<const NodeId> route) {
    double total = 0.0;
    for (std::size_t i = 1; i < route.size(); ++i) total += model.distance(route[i - 1], route[i]);
    return total;
}

}  // namespace evgen
