#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/geometry.hpp"

namespace evgen {

enum class NodeKind { depot, customer, station };

/// Depot is 0, customers 1..N, external stations N+1..N+|S|.
using NodeId = int;

struct Node {
    NodeId id = 0;
    NodeKind kind = NodeKind::depot;
    Point position;
};

struct TimeWindow {
    double earliest = 0.0;
    double latest = 0.0;
};

struct Customer {
    Node node;
    double demand = 0.0;
    double service = 0.0;
    TimeWindow window;
};

struct VehicleConfig {
    double capacity = 0.0;     // Q
    double battery = 0.0;      // B
    double consumption = 0.0;  // r, energy per unit distance
    double charge_rate = 0.0;  // g, energy per unit time

    double range() const { return battery / consumption; }
};

struct TemporalConfig {
    double horizon = 0.0;         // H
    double width_fraction = 0.0;  // phi

    double window_width() const { return width_fraction * horizon; }
};

struct Provenance {
    std::uint64_t seed = 0;
    GeneratorConfig config;
};

struct Instance {
    Node depot;
    std::vector<Customer> customers;
    std::vector<Node> stations;
    VehicleConfig vehicle;
    TemporalConfig temporal;
    std::optional<Provenance> provenance;

    int customer_count() const { return static_cast<int>(customers.size()); }
    int station_count() const { return static_cast<int>(stations.size()); }
    int node_count() const { return 1 + customer_count() + station_count(); }

    NodeKind kind(NodeId id) const;
    Point position(NodeId id) const;
    const Customer& customer(NodeId id) const;
    double total_demand() const;
};

/// Field-exact equality of everything except provenance.
bool same_problem(const Instance& a, const Instance& b);

/// Rounds to 12 significant digits, the precision of the text format, so that
/// a generated instance and its serialized form describe the same numbers.
double quantize(double value);

/// Checks id ordering, unit-square positions and window bounds. Returns a
/// description of the first problem, or nullopt.
std::optional<std::string> check_instance(const Instance& instance);

/// Dense view of an instance for routing code: distances, node attributes
/// and vehicle parameters indexed by NodeId.
class RoutingModel {
public:
    explicit RoutingModel(const Instance& instance);

    int node_count() const { return node_count_; }
    int customer_count() const { return customer_count_; }
    int station_count() const { return node_count_ - 1 - customer_count_; }

    bool is_customer(NodeId id) const { return id >= 1 && id <= customer_count_; }
    bool is_station(NodeId id) const { return id > customer_count_ && id < node_count_; }
    bool valid(NodeId id) const { return id >= 0 && id < node_count_; }

    double distance(NodeId a, NodeId b) const {
        return distances_[static_cast<std::size_t>(a) * node_count_ + b];
    }
    double demand(NodeId id) const { return demand_[id]; }
    double service(NodeId id) const { return service_[id]; }
    double earliest(NodeId id) const { return earliest_[id]; }
    double latest(NodeId id) const { return latest_[id]; }

    /// Distance to the closest charging node (depot or station) other than id.
    double nearest_charger_distance(NodeId id) const { return nearest_charger_[id]; }

    std::span<const NodeId> stations() const { return stations_; }

    const VehicleConfig& vehicle() const { return vehicle_; }
    double horizon() const { return horizon_; }

private:
    int node_count_ = 0;
    int customer_count_ = 0;
    std::vector<double> distances_;
    std::vector<double> demand_, service_, earliest_, latest_;
    std::vector<double> nearest_charger_;
    std::vector<NodeId> stations_;
    VehicleConfig vehicle_;
    double horizon_ = 0.0;
};

}  // namespace evgen
