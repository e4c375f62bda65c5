#include "evgen/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace evgen {

std::string_view to_string(Family family) {
    switch (family) {
        case Family::random: return "R";
        case Family::clustered: return "C";
        case Family::mixed: return "RC";
    }
    return "?";
}

std::string_view to_string(DepotMode mode) {
    switch (mode) {
        case DepotMode::center: return "center";
        case DepotMode::random: return "random";
        case DepotMode::user: return "user";
    }
    return "?";
}

std::string_view to_string(Regime regime) {
    switch (regime) {
        case Regime::wide: return "wide";
        case Regime::medium: return "medium";
        case Regime::tight: return "tight";
        case Regime::custom: return "custom";
    }
    return "?";
}

std::string_view to_string(BatteryMode mode) {
    return mode == BatteryMode::fixed ? "fixed" : "adaptive";
}

Family parse_family(std::string_view text) {
    if (text == "R") return Family::random;
    if (text == "C") return Family::clustered;
    if (text == "RC") return Family::mixed;
    throw ConfigError("spatial.family", "unknown family '" + std::string(text) + "' (expected R, C or RC)");
}

DepotMode parse_depot_mode(std::string_view text) {
    if (text == "center") return DepotMode::center;
    if (text == "random") return DepotMode::random;
    if (text == "user") return DepotMode::user;
    throw ConfigError("spatial.depot_mode", "unknown depot mode '" + std::string(text) + "'");
}

Regime parse_regime(std::string_view text) {
    if (text == "wide") return Regime::wide;
    if (text == "medium") return Regime::medium;
    if (text == "tight") return Regime::tight;
    if (text == "custom") return Regime::custom;
    throw ConfigError("time_windows.regime", "unknown regime '" + std::string(text) + "'");
}

BatteryMode parse_battery_mode(std::string_view text) {
    if (text == "fixed") return BatteryMode::fixed;
    if (text == "adaptive") return BatteryMode::adaptive;
    throw ConfigError("energy.mode", "unknown battery mode '" + std::string(text) + "'");
}

double regime_width_fraction(Regime regime) {
    switch (regime) {
        case Regime::wide: return 0.8;
        case Regime::medium: return 0.4;
        case Regime::tight: return 0.2;
        case Regime::custom: break;
    }
    throw ConfigError("time_windows.regime", "custom regime has no fixed width fraction");
}

void set_regime(GeneratorConfig& config, Regime regime) {
    config.windows.regime = regime;
    if (regime != Regime::custom) config.windows.width_fraction = regime_width_fraction(regime);
}

int default_station_count(int customers) {
    static const std::map<int, int> grid = {{5, 2},  {10, 3}, {20, 4}, {30, 4}, {40, 5},  {50, 6},
                                            {60, 7}, {70, 8}, {80, 9}, {90, 10}, {100, 12}};
    if (auto it = grid.find(customers); it != grid.end()) return it->second;
    return std::max(2, customers / 10 + 2);
}

std::vector<int> standard_sizes() { return {5, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100}; }

namespace {

std::string join_messages(const std::vector<FieldError>& errors) {
    std::string text = "invalid configuration:";
    for (const auto& e : errors) text += " " + e.field + ": " + e.message + ";";
    return text;
}

}  // namespace

ConfigError::ConfigError(std::vector<FieldError> errors)
    : std::runtime_error(join_messages(errors)), errors_(std::move(errors)) {}

ConfigError::ConfigError(std::string field, std::string message)
    : ConfigError(std::vector<FieldError>{{std::move(field), std::move(message)}}) {}

std::vector<FieldError> check_config(const GeneratorConfig& c) {
    std::vector<FieldError> errors;
    auto require = [&](bool ok, const char* field, const char* message) {
        if (!ok) errors.push_back({field, message});
    };
    auto finite = [](double v) { return std::isfinite(v); };

    const auto& s = c.spatial;
    require(s.customers >= 1, "spatial.customers", "customer count must be at least 1");
    if (s.family != Family::random) {
        require(s.clusters >= 1, "spatial.clusters", "cluster count must be at least 1");
        require(finite(s.sigma) && s.sigma > 0.0, "spatial.sigma", "sigma must be positive");
    }
    if (s.family == Family::mixed)
        require(finite(s.mix_ratio) && s.mix_ratio > 0.0 && s.mix_ratio < 1.0, "spatial.rho",
                "rho must lie in (0, 1)");
    require(finite(s.min_separation) && s.min_separation >= 0.0, "spatial.d_min", "d_min must be non-negative");
    require(s.separation_attempts >= 1, "spatial.separation_attempts", "must be at least 1");
    if (s.depot_mode == DepotMode::user)
        require(finite(s.user_depot.x) && finite(s.user_depot.y) && in_unit_square(s.user_depot), "spatial.depot",
                "user depot must lie in the unit square");

    const auto& st = c.stations;
    require(st.target_count >= 0, "stations.count", "station count must be non-negative");
    require(finite(st.perturbation) && st.perturbation >= 0.0, "stations.delta", "delta must be non-negative");
    require(st.midpoint_threshold > 0.0 && st.depot_threshold > 0.0 && st.nearest_station_threshold > 0.0 &&
                st.ray_fraction > 0.0 && st.station_separation >= 0.0 && st.customer_clearance >= 0.0,
            "stations.thresholds", "station thresholds must be positive");
    require(st.top_up_attempts >= 1, "stations.top_up_attempts", "must be at least 1");

    const auto& e = c.energy;
    if (e.mode == BatteryMode::fixed)
        require(finite(e.battery) && e.battery > 0.0, "energy.battery", "battery capacity must be positive");
    require(finite(e.kappa) && e.kappa > 0.0, "energy.kappa", "kappa must be positive");
    require(finite(e.min_range) && finite(e.max_range) && e.min_range > 0.0 && e.min_range <= e.max_range,
            "energy.range", "require 0 < range_min <= range_max");

    require(finite(c.service.min_service) && finite(c.service.max_service) && c.service.min_service >= 0.0 &&
                c.service.min_service <= c.service.max_service,
            "service", "require 0 <= service_min <= service_max");

    const auto& w = c.windows;
    require(finite(w.horizon) && w.horizon > 0.0, "time_windows.horizon", "horizon H must be positive");
    require(finite(w.width_fraction) && w.width_fraction > 0.0 && w.width_fraction <= 1.0, "time_windows.phi",
            "phi must lie in (0, 1]");
    if (w.regime != Regime::custom && std::abs(w.width_fraction - regime_width_fraction(w.regime)) > 1e-12)
        errors.push_back({"time_windows.phi", "phi does not match the named regime"});

    const auto& v = c.vehicle;
    require(finite(v.capacity) && v.capacity > 0.0, "vehicle.capacity", "capacity Q must be positive");
    require(finite(v.consumption) && v.consumption > 0.0, "vehicle.consumption_rate",
            "consumption rate r must be positive");
    require(finite(v.charge_rate) && v.charge_rate > 0.0, "vehicle.charge_rate", "charge rate g must be positive");

    const auto& lim = c.verification.limits;
    require(c.verification.max_customers >= 0, "verification.max_customers", "must be non-negative");
    require(lim.time_budget_seconds > 0.0 && lim.node_budget > 0 && lim.max_station_visits >= 1 &&
                lim.max_vehicles >= 0,
            "verification.limits", "search limits must be positive");
    return errors;
}

void validate(const GeneratorConfig& config) {
    auto errors = check_config(config);
    if (!errors.empty()) throw ConfigError(std::move(errors));
}

}  // namespace evgen
