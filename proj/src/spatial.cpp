#include "evgen/spatial.hpp"

#include <cmath>

namespace evgen {

Point place_depot(const SpatialConfig& config, Rng& rng) {
    switch (config.depot_mode) {
        case DepotMode::center: return {0.5, 0.5};
        case DepotMode::random: return rng.uniform_point();
        case DepotMode::user:
            if (!in_unit_square(config.user_depot))
                throw ConfigError("spatial.depot", "user depot must lie in the unit square");
            return config.user_depot;
    }
    return {0.5, 0.5};
}

namespace {

bool clear_of(Point p, std::span<const Point> a, std::span<const Point> b, double min_separation) {
    for (const auto& q : a)
        if (euclidean_distance(p, q) < min_separation) return false;
    for (const auto& q : b)
        if (euclidean_distance(p, q) < min_separation) return false;
    return true;
}

}  // namespace

CustomerLayout sample_customers_random(int count, double min_separation, Rng& rng, int attempts,
                                       std::span<const Point> placed) {
    CustomerLayout layout;
    layout.points.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int i = 0; i < count; ++i) {
        Point p{};
        bool clear = false;
        for (int attempt = 0; attempt < attempts && !clear; ++attempt) {
            p = rng.uniform_point();
            clear = clear_of(p, placed, layout.points, min_separation);
        }
        if (!clear) ++layout.forced_acceptances;
        layout.points.push_back(p);
    }
    return layout;
}

CustomerLayout sample_customers_clustered(int count, int clusters, double sigma, Rng& rng) {
    CustomerLayout layout;
    for (int c = 0; c < clusters; ++c) layout.centers.push_back(rng.uniform_point());
    for (int i = 0; i < count; ++i) {
        const Point& mu = layout.centers[static_cast<std::size_t>(i % clusters)];
        const double dx = sigma * rng.normal();
        const double dy = sigma * rng.normal();
        layout.points.push_back(clip_unit_square({mu.x + dx, mu.y + dy}));
    }
    return layout;
}

int clustered_share(int count, double mix_ratio) {
    return static_cast<int>(std::floor(mix_ratio * count + 0.5));
}

CustomerLayout sample_customers_mixed(int count, double mix_ratio, int clusters, double sigma,
                                      double min_separation, Rng& rng, int attempts) {
    const int clustered = clustered_share(count, mix_ratio);
    CustomerLayout layout = sample_customers_clustered(clustered, clusters, sigma, rng);
    CustomerLayout rest = sample_customers_random(count - clustered, min_separation, rng, attempts, layout.points);
    layout.points.insert(layout.points.end(), rest.points.begin(), rest.points.end());
    layout.forced_acceptances = rest.forced_acceptances;
    return layout;
}

CustomerLayout sample_customers(const SpatialConfig& config, Rng& rng) {
    switch (config.family) {
        case Family::random:
            return sample_customers_random(config.customers, config.min_separation, rng, config.separation_attempts);
        case Family::clustered:
            return sample_customers_clustered(config.customers, config.clusters, config.sigma, rng);
        case Family::mixed:
            return sample_customers_mixed(config.customers, config.mix_ratio, config.clusters, config.sigma,
                                          config.min_separation, rng, config.separation_attempts);
    }
    return {};
}

}  // namespace evgen
