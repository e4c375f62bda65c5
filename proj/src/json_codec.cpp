#include "evgen/json_codec.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace evgen {

json config_to_json(const GeneratorConfig& c) {
    json j;
    j["spatial"] = {{"family", to_string(c.spatial.family)},
                    {"depot_mode", to_string(c.spatial.depot_mode)},
                    {"depot", {c.spatial.user_depot.x, c.spatial.user_depot.y}},
                    {"customers", c.spatial.customers},
                    {"clusters", c.spatial.clusters},
                    {"sigma", c.spatial.sigma},
                    {"rho", c.spatial.mix_ratio},
                    {"d_min", c.spatial.min_separation},
                    {"separation_attempts", c.spatial.separation_attempts}};
    j["stations"] = {{"count", c.stations.target_count},
                     {"delta", c.stations.perturbation},
                     {"midpoint_threshold", c.stations.midpoint_threshold},
                     {"depot_threshold", c.stations.depot_threshold},
                     {"nearest_station_threshold", c.stations.nearest_station_threshold},
                     {"ray_fraction", c.stations.ray_fraction},
                     {"station_separation", c.stations.station_separation},
                     {"customer_clearance", c.stations.customer_clearance},
                     {"top_up_attempts", c.stations.top_up_attempts}};
    j["energy"] = {{"mode", to_string(c.energy.mode)},
                   {"battery", c.energy.battery},
                   {"kappa", c.energy.kappa},
                   {"range_min", c.energy.min_range},
                   {"range_max", c.energy.max_range}};
    j["service"] = {{"min", c.service.min_service}, {"max", c.service.max_service}};
    j["time_windows"] = {{"horizon", c.windows.horizon},
                         {"regime", to_string(c.windows.regime)},
                         {"phi", c.windows.width_fraction},
                         {"randomized_starts", c.windows.randomized_starts}};
    j["vehicle"] = {{"capacity", c.vehicle.capacity},
                    {"consumption_rate", c.vehicle.consumption},
                    {"charge_rate", c.vehicle.charge_rate}};
    const auto& lim = c.verification.limits;
    j["verification"] = {{"enabled", c.verification.enabled},
                         {"max_customers", c.verification.max_customers},
                         {"time_budget_seconds", lim.time_budget_seconds},
                         {"node_budget", lim.node_budget},
                         {"max_station_visits", lim.max_station_visits},
                         {"max_vehicles", lim.max_vehicles},
                         {"fleet", lim.fleet == FleetMode::fleet ? "fleet" : "single"}};
    return j;
}

namespace {

class Reader {
public:
    explicit Reader(std::vector<FieldError>& errors) : errors_(errors) {}

    template <typename T>
    void read(const json& parent, const char* section, const char* key, T& target) {
        if (!parent.contains(section)) return;
        const json& s = parent.at(section);
        if (!s.is_object()) {
            errors_.push_back({section, "must be an object"});
            return;
        }
        if (!s.contains(key)) return;
        const std::string field = std::string(section) + "." + key;
        const json& v = s.at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
                target = v.get<bool>();
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
                target = v.get<T>();
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) throw std::invalid_argument("expected a number");
                target = v.get<T>();
            } else {
                if (!v.is_string()) throw std::invalid_argument("expected a string");
                target = v.get<T>();
            }
        } catch (const std::exception& e) {
            errors_.push_back({field, e.what()});
        }
    }

private:
    std::vector<FieldError>& errors_;
};

template <typename Enum, typename Parse>
void read_enum(Reader& r, const json& doc, const char* section, const char* key, Enum& target, Parse parse,
               std::vector<FieldError>& errors) {
    std::string text;
    bool present = doc.contains(section) && doc.at(section).is_object() && doc.at(section).contains(key);
    if (!present) return;
    r.read(doc, section, key, text);
    if (text.empty()) return;
    try {
        target = parse(text);
    } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
}

}  // namespace

GeneratorConfig config_from_json(const json& doc, const GeneratorConfig& defaults) {
    GeneratorConfig c = defaults;
    std::vector<FieldError> errors;
    if (!doc.is_object()) throw ConfigError("config", "must be a JSON object");
    Reader r(errors);

    read_enum(r, doc, "spatial", "family", c.spatial.family, parse_family, errors);
    read_enum(r, doc, "spatial", "depot_mode", c.spatial.depot_mode, parse_depot_mode, errors);
    if (doc.contains("spatial") && doc["spatial"].is_object() && doc["spatial"].contains("depot")) {
        const auto& d = doc["spatial"]["depot"];
        if (d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number())
            c.spatial.user_depot = {d[0].get<double>(), d[1].get<double>()};
        else
            errors.push_back({"spatial.depot", "expected [x, y]"});
    }
    r.read(doc, "spatial", "customers", c.spatial.customers);
    r.read(doc, "spatial", "clusters", c.spatial.clusters);
    r.read(doc, "spatial", "sigma", c.spatial.sigma);
    r.read(doc, "spatial", "rho", c.spatial.mix_ratio);
    r.read(doc, "spatial", "d_min", c.spatial.min_separation);
    r.read(doc, "spatial", "separation_attempts", c.spatial.separation_attempts);

    r.read(doc, "stations", "count", c.stations.target_count);
    r.read(doc, "stations", "delta", c.stations.perturbation);
    r.read(doc, "stations", "midpoint_threshold", c.stations.midpoint_threshold);
    r.read(doc, "stations", "depot_threshold", c.stations.depot_threshold);
    r.read(doc, "stations", "nearest_station_threshold", c.stations.nearest_station_threshold);
    r.read(doc, "stations", "ray_fraction", c.stations.ray_fraction);
    r.read(doc, "stations", "station_separation", c.stations.station_separation);
    r.read(doc, "stations", "customer_clearance", c.stations.customer_clearance);
    r.read(doc, "stations", "top_up_attempts", c.stations.top_up_attempts);

    read_enum(r, doc, "energy", "mode", c.energy.mode, parse_battery_mode, errors);
    r.read(doc, "energy", "battery", c.energy.battery);
    r.read(doc, "energy", "kappa", c.energy.kappa);
    r.read(doc, "energy", "range_min", c.energy.min_range);
    r.read(doc, "energy", "range_max", c.energy.max_range);

    r.read(doc, "service", "min", c.service.min_service);
    r.read(doc, "service", "max", c.service.max_service);

    r.read(doc, "time_windows", "horizon", c.windows.horizon);
    const bool has_regime = doc.contains("time_windows") && doc["time_windows"].is_object() &&
                            doc["time_windows"].contains("regime");
    const bool has_phi =
        doc.contains("time_windows") && doc["time_windows"].is_object() && doc["time_windows"].contains("phi");
    if (has_regime) {
        read_enum(r, doc, "time_windows", "regime", c.windows.regime, parse_regime, errors);
        if (c.windows.regime != Regime::custom) c.windows.width_fraction = regime_width_fraction(c.windows.regime);
    }
    if (has_phi) {
        r.read(doc, "time_windows", "phi", c.windows.width_fraction);
        if (!has_regime || c.windows.regime == Regime::custom) {
            c.windows.regime = Regime::custom;
            for (auto named : {Regime::wide, Regime::medium, Regime::tight})
                if (c.windows.width_fraction == regime_width_fraction(named)) c.windows.regime = named;
        }
    }
    r.read(doc, "time_windows", "randomized_starts", c.windows.randomized_starts);

    r.read(doc, "vehicle", "capacity", c.vehicle.capacity);
    r.read(doc, "vehicle", "consumption_rate", c.vehicle.consumption);
    r.read(doc, "vehicle", "charge_rate", c.vehicle.charge_rate);

    auto& lim = c.verification.limits;
    r.read(doc, "verification", "enabled", c.verification.enabled);
    r.read(doc, "verification", "max_customers", c.verification.max_customers);
    r.read(doc, "verification", "time_budget_seconds", lim.time_budget_seconds);
    r.read(doc, "verification", "node_budget", lim.node_budget);
    r.read(doc, "verification", "max_station_visits", lim.max_station_visits);
    r.read(doc, "verification", "max_vehicles", lim.max_vehicles);
    std::string fleet;
    r.read(doc, "verification", "fleet", fleet);
    if (fleet == "single")
        lim.fleet = FleetMode::single_vehicle;
    else if (fleet == "fleet")
        lim.fleet = FleetMode::fleet;
    else if (!fleet.empty())
        errors.push_back({"verification.fleet", "expected 'fleet' or 'single'"});

    auto semantic = check_config(c);
    for (auto& e : semantic) {
        bool duplicate = false;
        for (const auto& seen : errors) duplicate = duplicate || seen.field == e.field;
        if (!duplicate) errors.push_back(std::move(e));
    }
    if (!errors.empty()) throw ConfigError(std::move(errors));
    return c;
}

json instance_to_json(const Instance& in) {
    json j;
    j["depot"] = {{"id", 0}, {"x", in.depot.position.x}, {"y", in.depot.position.y}};
    j["customers"] = json::array();
    for (const auto& c : in.customers)
        j["customers"].push_back({{"id", c.node.id},
                                  {"x", c.node.position.x},
                                  {"y", c.node.position.y},
                                  {"demand", c.demand},
                                  {"service", c.service},
                                  {"earliest", c.window.earliest},
                                  {"latest", c.window.latest}});
    j["stations"] = json::array();
    for (const auto& s : in.stations)
        j["stations"].push_back({{"id", s.id}, {"x", s.position.x}, {"y", s.position.y}});
    j["vehicle"] = {{"capacity", in.vehicle.capacity},
                    {"battery", in.vehicle.battery},
                    {"consumption_rate", in.vehicle.consumption},
                    {"charge_rate", in.vehicle.charge_rate},
                    {"range", in.vehicle.range()}};
    j["temporal"] = {{"horizon", in.temporal.horizon},
                     {"phi", in.temporal.width_fraction},
                     {"window_width", in.temporal.window_width()}};
    return j;
}

json screening_to_json(const ScreeningReport& report) {
    json j;
    j["passed"] = report.passed();
    j["violations"] = json::array();
    for (const auto& v : report.violations) {
        json row = {{"condition", to_string(v.condition)}, {"customer", v.customer}};
        // No stations gives an infinite distance, which JSON cannot carry.
        row["measured"] = std::isfinite(v.measured) ? json(v.measured) : json(nullptr);
        row["threshold"] = v.threshold;
        j["violations"].push_back(std::move(row));
    }
    return j;
}

ScreeningReport screening_from_json(const json& j) {
    ScreeningReport report;
    for (const auto& row : j.at("violations")) {
        ScreeningViolation v;
        v.condition = parse_condition(row.at("condition").get<std::string>());
        v.customer = row.at("customer").get<int>();
        v.measured = row.at("measured").is_null() ? std::numeric_limits<double>::infinity()
                                                  : row.at("measured").get<double>();
        v.threshold = row.at("threshold").get<double>();
        report.violations.push_back(v);
    }
    return report;
}

json verification_to_json(const VerificationResult& r, bool include_timing) {
    json j;
    j["status"] = to_string(r.status);
    j["vehicle_limit"] = r.vehicle_limit;
    j["nodes_explored"] = r.nodes_explored;
    j["feasible_customer_sets"] = r.feasible_customer_sets;
    j["witness"] = r.witness;
    if (include_timing) j["elapsed_seconds"] = r.elapsed_seconds;
    return j;
}

}  // namespace evgen
