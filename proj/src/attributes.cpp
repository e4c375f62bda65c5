#include "evgen/attributes.hpp"

#include <algorithm>
#include <numeric>

namespace evgen {

std::vector<double> sample_demands(int count, double capacity, Rng& rng) {
    std::vector<double> demands;
    demands.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) demands.push_back(rng.uniform(0.02 * capacity, 0.30 * capacity));
    const double total = std::accumulate(demands.begin(), demands.end(), 0.0);
    if (total > 3.0 * capacity) {
        const double scale = 3.0 * capacity / total;
        for (double& q : demands) q *= scale;
    }
    return demands;
}

std::vector<double> sample_service_times(int count, double min_service, double max_service, Rng& rng) {
    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) times.push_back(rng.uniform(min_service, max_service));
    return times;
}

double max_pairwise_distance(std::span<const Point> points) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j)
            best = std::max(best, euclidean_distance(points[i], points[j]));
    return best;
}

double adaptive_battery(std::span<const Point> customers, double consumption, const EnergyConfig& config) {
    if (config.mode == BatteryMode::fixed) return config.battery;
    const double target_range = config.kappa * max_pairwise_distance(customers);
    return consumption * std::max(config.min_range, std::min(config.max_range, target_range));
}

std::vector<TimeWindow> assign_time_windows(int count, double horizon, double width_fraction) {
    const double width = width_fraction * horizon;
    std::vector<TimeWindow> windows;
    for (int i = 1; i <= count; ++i) {
        const double earliest = static_cast<double>(i) / count * 0.3 * horizon;
        if (earliest + width >= horizon)
            windows.push_back({horizon - width, horizon});
        else
            windows.push_back({earliest, earliest + width});
    }
    return windows;
}

std::vector<TimeWindow> sample_time_windows(int count, double horizon, double width_fraction, Rng& rng) {
    const double width = width_fraction * horizon;
    std::vector<TimeWindow> windows;
    for (int i = 0; i < count; ++i) {
        const double earliest = rng.uniform(0.0, horizon - width);
        windows.push_back({earliest, earliest + width});
    }
    return windows;
}

}  // namespace evgen
