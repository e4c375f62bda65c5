#include "evgen/stations.hpp"

#include <algorithm>
#include <limits>

namespace evgen {

std::vector<Point> candidate_midpoint_stations(std::span<const Point> customers, double range, double delta,
                                               Rng& rng, const StationConfig& rules) {
    std::vector<Point> out;
    const double threshold = rules.midpoint_threshold * range;
    for (std::size_t i = 0; i < customers.size(); ++i) {
        for (std::size_t j = i + 1; j < customers.size(); ++j) {
            if (!(euclidean_distance(customers[i], customers[j]) > threshold)) continue;
            const double ex = rng.uniform(-delta, delta);
            const double ey = rng.uniform(-delta, delta);
            const Point mid{(customers[i].x + customers[j].x) / 2.0, (customers[i].y + customers[j].y) / 2.0};
            out.push_back(clip_unit_square({mid.x + ex, mid.y + ey}));
        }
    }
    return out;
}

std::vector<Point> candidate_depot_ray_stations(Point depot, std::span<const Point> customers,
                                                std::span<const Point> existing, double range,
                                                const StationConfig& rules) {
    std::vector<Point> out;
    for (const Point& c : customers) {
        const double d0 = euclidean_distance(depot, c);
        if (!(d0 > rules.depot_threshold * range)) continue;
        double nearest = std::numeric_limits<double>::infinity();
        for (const Point& s : existing) nearest = std::min(nearest, euclidean_distance(c, s));
        for (const Point& s : out) nearest = std::min(nearest, euclidean_distance(c, s));
        if (!(nearest > rules.nearest_station_threshold * range)) continue;
        const double step = rules.ray_fraction * range / d0;
        out.push_back(clip_unit_square({depot.x + step * (c.x - depot.x), depot.y + step * (c.y - depot.y)}));
    }
    return out;
}

namespace {

bool separated(Point p, std::span<const Point> stations, double min_gap) {
    return std::all_of(stations.begin(), stations.end(),
                       [&](const Point& s) { return euclidean_distance(p, s) >= min_gap; });
}

bool clear_of_customers(Point p, std::span<const Point> customers, double clearance) {
    return separated(p, customers, clearance);
}

}  // namespace

std::vector<Point> filter_stations(std::span<const Point> candidates, std::span<const Point> customers, double range,
                                   std::span<const Point> kept, const StationConfig& rules) {
    std::vector<Point> all(kept.begin(), kept.end());
    std::vector<Point> survivors;
    const double gap = rules.station_separation * range;
    for (const Point& p : candidates) {
        if (separated(p, all, gap) && clear_of_customers(p, customers, rules.customer_clearance)) {
            all.push_back(p);
            survivors.push_back(p);
        }
    }
    return survivors;
}

TopUpResult top_up_stations(std::span<const Point> kept, int target_count, std::span<const Point> customers,
                            double range, Rng& rng, const StationConfig& rules) {
    TopUpResult result;
    std::vector<Point> all(kept.begin(), kept.end());
    const double gap = rules.station_separation * range;
    while (static_cast<int>(all.size()) < target_count) {
        bool placed = false;
        for (int attempt = 0; attempt < rules.top_up_attempts && !placed; ++attempt) {
            const Point p = rng.uniform_point();
            if (separated(p, all, gap) && clear_of_customers(p, customers, rules.customer_clearance)) {
                all.push_back(p);
                result.added.push_back(p);
                placed = true;
            }
        }
        if (placed) continue;

        // Separation dropped for this station. If even the clearance cannot be
        // met within the same number of draws, keep the draw farthest from
        // any customer.
        Point best{};
        double best_clearance = -1.0;
        for (int attempt = 0; attempt < rules.top_up_attempts; ++attempt) {
            const Point p = rng.uniform_point();
            double clearance = std::numeric_limits<double>::infinity();
            for (const Point& c : customers) clearance = std::min(clearance, euclidean_distance(p, c));
            if (clearance > best_clearance) {
                best = p;
                best_clearance = clearance;
            }
            if (clearance >= rules.customer_clearance) break;
        }
        all.push_back(best);
        result.added.push_back(best);
        ++result.relaxed;
    }
    return result;
}

Infrastructure build_infrastructure(Point depot, std::span<const Point> customers, const StationConfig& config,
                                    double range, Rng& rng) {
    Infrastructure infra;

    const auto midpoints = candidate_midpoint_stations(customers, range, config.perturbation, rng, config);
    infra.midpoint_candidates = static_cast<int>(midpoints.size());
    const auto kept_midpoints = filter_stations(midpoints, customers, range, {}, config);

    const auto rays = candidate_depot_ray_stations(depot, customers, kept_midpoints, range, config);
    infra.ray_candidates = static_cast<int>(rays.size());
    const auto kept_rays = filter_stations(rays, customers, range, kept_midpoints, config);

    // Rule output beyond the target is cut back greedily: each pick is the
    // survivor covering the most customers not yet within R of a chosen
    // station, ties going to ray stations first and then generation order.
    std::vector<Point> pool(kept_rays.begin(), kept_rays.end());
    pool.insert(pool.end(), kept_midpoints.begin(), kept_midpoints.end());
    const auto target = static_cast<std::size_t>(std::max(config.target_count, 0));
    std::vector<Point> chosen;
    std::vector<bool> used(pool.size(), false);
    std::vector<bool> covered(customers.size(), false);
    while (chosen.size() < target && chosen.size() < pool.size()) {
        std::size_t best = pool.size();
        int best_gain = -1;
        for (std::size_t k = 0; k < pool.size(); ++k) {
            if (used[k]) continue;
            int gain = 0;
            for (std::size_t i = 0; i < customers.size(); ++i)
                if (!covered[i] && euclidean_distance(pool[k], customers[i]) <= range + kTolerance) ++gain;
            if (gain > best_gain) {
                best_gain = gain;
                best = k;
            }
        }
        used[best] = true;
        chosen.push_back(pool[best]);
        infra.origins.push_back(best < kept_rays.size() ? StationOrigin::depot_ray : StationOrigin::midpoint);
        for (std::size_t i = 0; i < customers.size(); ++i)
            if (euclidean_distance(pool[best], customers[i]) <= range + kTolerance) covered[i] = true;
    }
    infra.truncated = static_cast<int>(pool.size() - chosen.size());

    const auto top_up = top_up_stations(chosen, config.target_count, customers, range, rng, config);
    infra.relaxed = top_up.relaxed;
    for (const Point& p : top_up.added) {
        chosen.push_back(p);
        infra.origins.push_back(StationOrigin::top_up);
    }

    const int first_id = static_cast<int>(customers.size()) + 1;
    for (std::size_t i = 0; i < chosen.size(); ++i)
        infra.stations.push_back({first_id + static_cast<int>(i), NodeKind::station, chosen[i]});
    return infra;
}

}  // namespace evgen
