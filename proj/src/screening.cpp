#include "evgen/screening.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace evgen {

std::string_view to_string(Condition condition) {
    switch (condition) {
        case Condition::energy_reachability: return "energy_reachability";
        case Condition::depot_return: return "depot_return";
        case Condition::station_accessibility: return "station_accessibility";
    }
    return "?";
}

Condition parse_condition(std::string_view text) {
    for (auto c : {Condition::energy_reachability, Condition::depot_return, Condition::station_accessibility})
        if (to_string(c) == text) return c;
    throw std::invalid_argument("unknown screening condition '" + std::string(text) + "'");
}

bool ScreeningReport::violates(Condition condition) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const ScreeningViolation& v) { return v.condition == condition; });
}

namespace {

double nearest_station(const Instance& in, Point p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : in.stations) best = std::min(best, euclidean_distance(p, s.position));
    return best;
}

void append(ScreeningReport& into, const ScreeningReport& from) {
    into.violations.insert(into.violations.end(), from.violations.begin(), from.violations.end());
}

}  // namespace

ScreeningReport check_energy_reachability(const Instance& in) {
    ScreeningReport report;
    const double range = in.vehicle.range();
    for (const auto& c : in.customers) {
        const double d = std::min(euclidean_distance(c.node.position, in.depot.position),
                                  nearest_station(in, c.node.position));
        if (d > range + kTolerance) report.violations.push_back({Condition::energy_reachability, c.node.id, d, range});
    }
    return report;
}

ScreeningReport check_depot_return(const Instance& in) {
    ScreeningReport report;
    const double horizon = in.temporal.horizon;
    for (const auto& c : in.customers) {
        const double finish =
            c.window.earliest + c.service + travel_time(euclidean_distance(c.node.position, in.depot.position));
        if (finish > horizon + kTolerance)
            report.violations.push_back({Condition::depot_return, c.node.id, finish, horizon});
    }
    return report;
}

ScreeningReport check_station_accessibility(const Instance& in) {
    ScreeningReport report;
    const double range = in.vehicle.range();
    for (const auto& c : in.customers) {
        const double d = nearest_station(in, c.node.position);
        if (d > range + kTolerance)
            report.violations.push_back({Condition::station_accessibility, c.node.id, d, range});
    }
    return report;
}

ScreeningReport screen(const Instance& in) {
    ScreeningReport report = check_energy_reachability(in);
    append(report, check_depot_return(in));
    append(report, check_station_accessibility(in));
    return report;
}

}  // namespace evgen
