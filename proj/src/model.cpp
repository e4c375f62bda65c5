#include "evgen/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

namespace evgen {

NodeKind Instance::kind(NodeId id) const {
    if (id == 0) return NodeKind::depot;
    if (id >= 1 && id <= customer_count()) return NodeKind::customer;
    if (id > customer_count() && id < node_count()) return NodeKind::station;
    throw std::out_of_range("node id " + std::to_string(id) + " out of range");
}

Point Instance::position(NodeId id) const {
    switch (kind(id)) {
        case NodeKind::depot: return depot.position;
        case NodeKind::customer: return customers[id - 1].node.position;
        case NodeKind::station: return stations[id - 1 - customer_count()].position;
    }
    return {};
}

const Customer& Instance::customer(NodeId id) const {
    if (id < 1 || id > customer_count()) throw std::out_of_range("not a customer id: " + std::to_string(id));
    return customers[id - 1];
}

double Instance::total_demand() const {
    double total = 0.0;
    for (const auto& c : customers) total += c.demand;
    return total;
}

namespace {

bool same_node(const Node& a, const Node& b) {
    return a.id == b.id && a.kind == b.kind && a.position == b.position;
}

}  // namespace

bool same_problem(const Instance& a, const Instance& b) {
    if (!same_node(a.depot, b.depot)) return false;
    if (a.customers.size() != b.customers.size() || a.stations.size() != b.stations.size()) return false;
    for (std::size_t i = 0; i < a.customers.size(); ++i) {
        const auto& x = a.customers[i];
        const auto& y = b.customers[i];
        if (!same_node(x.node, y.node) || x.demand != y.demand || x.service != y.service ||
            x.window.earliest != y.window.earliest || x.window.latest != y.window.latest)
            return false;
    }
    for (std::size_t i = 0; i < a.stations.size(); ++i)
        if (!same_node(a.stations[i], b.stations[i])) return false;
    return a.vehicle.capacity == b.vehicle.capacity && a.vehicle.battery == b.vehicle.battery &&
           a.vehicle.consumption == b.vehicle.consumption && a.vehicle.charge_rate == b.vehicle.charge_rate &&
           a.temporal.horizon == b.temporal.horizon && a.temporal.width_fraction == b.temporal.width_fraction;
}

double quantize(double value) {
    if (!std::isfinite(value)) return value;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    const double q = std::strtod(buf, nullptr);
    return q == 0.0 ? 0.0 : q;  // drop negative zero
}

std::optional<std::string> check_instance(const Instance& in) {
    const int n = in.customer_count();
    if (in.depot.id != 0 || in.depot.kind != NodeKind::depot) return "depot must have id 0";
    if (!in_unit_square(in.depot.position)) return "depot outside the unit square";
    for (int i = 0; i < n; ++i) {
        const auto& c = in.customers[i];
        if (c.node.id != i + 1 || c.node.kind != NodeKind::customer)
            return "customer " + std::to_string(i + 1) + " has id " + std::to_string(c.node.id);
        if (!in_unit_square(c.node.position)) return "customer " + std::to_string(i + 1) + " outside the unit square";
        if (!(c.window.earliest >= -kTolerance && c.window.earliest <= c.window.latest + kTolerance &&
              c.window.latest <= in.temporal.horizon + kTolerance))
            return "customer " + std::to_string(i + 1) + " window outside [0, H]";
        if (!(c.demand >= 0.0) || !(c.service >= 0.0))
            return "customer " + std::to_string(i + 1) + " has negative demand or service";
    }
    for (int j = 0; j < in.station_count(); ++j) {
        const auto& s = in.stations[j];
        if (s.id != n + 1 + j || s.kind != NodeKind::station)
            return "station " + std::to_string(j) + " has id " + std::to_string(s.id);
        if (!in_unit_square(s.position)) return "station " + std::to_string(s.id) + " outside the unit square";
    }
    const auto& v = in.vehicle;
    if (!(v.capacity > 0.0 && v.battery > 0.0 && v.consumption > 0.0 && v.charge_rate > 0.0))
        return "vehicle parameters must be positive";
    if (!(in.temporal.horizon > 0.0)) return "horizon must be positive";
    if (!(in.temporal.width_fraction > 0.0 && in.temporal.width_fraction <= 1.0)) return "phi must lie in (0, 1]";
    return std::nullopt;
}

RoutingModel::RoutingModel(const Instance& in)
    : node_count_(in.node_count()),
      customer_count_(in.customer_count()),
      vehicle_(in.vehicle),
      horizon_(in.temporal.horizon) {
    const auto n = static_cast<std::size_t>(node_count_);
    std::vector<Point> pos(n);
    for (NodeId id = 0; id < node_count_; ++id) pos[id] = in.position(id);

    distances_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) distances_[a * n + b] = euclidean_distance(pos[a], pos[b]);

    demand_.assign(n, 0.0);
    service_.assign(n, 0.0);
    earliest_.assign(n, 0.0);
    latest_.assign(n, horizon_);
    for (const auto& c : in.customers) {
        demand_[c.node.id] = c.demand;
        service_[c.node.id] = c.service;
        earliest_[c.node.id] = c.window.earliest;
        latest_[c.node.id] = c.window.latest;
    }
    for (const auto& s : in.stations) stations_.push_back(s.id);

    nearest_charger_.assign(n, std::numeric_limits<double>::infinity());
    for (NodeId id = 0; id < node_count_; ++id) {
        if (id != 0) nearest_charger_[id] = distance(id, 0);
        for (NodeId s : stations_)
            if (s != id) nearest_charger_[id] = std::min(nearest_charger_[id], distance(id, s));
    }
}

}  // namespace evgen
