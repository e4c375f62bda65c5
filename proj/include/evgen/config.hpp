#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evgen/geometry.hpp"
#include "evgen/search_limits.hpp"

namespace evgen {

enum class Family { random, clustered, mixed };
enum class DepotMode { center, random, user };
enum class Regime { wide, medium, tight, custom };
enum class BatteryMode { fixed, adaptive };

std::string_view to_string(Family family);   // "R", "C", "RC"
std::string_view to_string(DepotMode mode);  // "center", "random", "user"
std::string_view to_string(Regime regime);   // "wide", "medium", "tight", "custom"
std::string_view to_string(BatteryMode mode);

Family parse_family(std::string_view text);
DepotMode parse_depot_mode(std::string_view text);
Regime parse_regime(std::string_view text);
BatteryMode parse_battery_mode(std::string_view text);

/// Window width fraction of a named regime: wide 0.8, medium 0.4, tight 0.2.
double regime_width_fraction(Regime regime);

struct SpatialConfig {
    Family family = Family::random;
    DepotMode depot_mode = DepotMode::center;
    Point user_depot{0.5, 0.5};
    int customers = 10;
    int clusters = 3;
    double sigma = 0.05;
    double mix_ratio = 0.5;  // rho, clustered share for RC
    double min_separation = 0.04;
    int separation_attempts = 10;
};

/// Range-aware placement rules. Thresholds are fractions of the travel range
/// R except customer_clearance, which is absolute.
struct StationConfig {
    int target_count = 3;
    double perturbation = 0.02;  // delta
    double midpoint_threshold = 0.8;
    double depot_threshold = 0.7;
    double nearest_station_threshold = 0.5;
    double ray_fraction = 0.6;
    double station_separation = 0.3;
    double customer_clearance = 0.04;
    int top_up_attempts = 200;
};

struct EnergyConfig {
    BatteryMode mode = BatteryMode::adaptive;
    double battery = 0.1;  // used in fixed mode
    double kappa = 0.8;
    double min_range = 0.15;
    double max_range = 0.40;
};

struct ServiceConfig {
    double min_service = 0.01;
    double max_service = 0.03;
};

struct TimeWindowConfig {
    double horizon = 2.0;
    Regime regime = Regime::medium;
    double width_fraction = 0.4;  // phi
    bool randomized_starts = false;
};

struct VehicleParams {
    double capacity = 1.5;
    double consumption = 0.25;
    double charge_rate = 1.0;
};

struct VerificationConfig {
    bool enabled = true;
    int max_customers = 10;
    SearchLimits limits;
};

struct GeneratorConfig {
    SpatialConfig spatial;
    StationConfig stations;
    EnergyConfig energy;
    ServiceConfig service;
    TimeWindowConfig windows;
    VehicleParams vehicle;
    VerificationConfig verification;
};

/// Sets both the regime tag and phi.
void set_regime(GeneratorConfig& config, Regime regime);

/// Station count used by the standard size grid (5C2S ... 100C12S). Sizes
/// outside the grid interpolate as N/10 + 2, clamped below by 2.
int default_station_count(int customers);

/// The eleven standard sizes 5, 10, 20, ..., 100.
std::vector<int> standard_sizes();

struct FieldError {
    std::string field;
    std::string message;
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<FieldError> errors);
    ConfigError(std::string field, std::string message);
    const std::vector<FieldError>& errors() const { return errors_; }

private:
    std::vector<FieldError> errors_;
};

std::vector<FieldError> check_config(const GeneratorConfig& config);

/// Throws ConfigError listing every invalid field.
void validate(const GeneratorConfig& config);

}  // namespace evgen
