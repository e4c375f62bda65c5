#pragma once

#include <span>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/geometry.hpp"
#include "evgen/rng.hpp"

namespace evgen {

/// Customer coordinates plus the diagnostics of how they were drawn.
struct CustomerLayout {
    std::vector<Point> points;
    std::vector<Point> centers;  // cluster centers, empty for R
    int forced_acceptances = 0;  // points accepted after exhausting separation attempts
};

/// center -> (0.5, 0.5); random -> one uniform point (two draws); user -> the
/// configured point, which must lie in the unit square.
Point place_depot(const SpatialConfig& config, Rng& rng);

/// Uniform points with rejection on a minimum separation. Each point gets at
/// most `attempts` draws; when every draw violates the separation the last
/// draw is kept and counted as forced. `placed` are earlier points the new
/// ones must also keep clear of.
CustomerLayout sample_customers_random(int count, double min_separation, Rng& rng, int attempts = 10,
                                       std::span<const Point> placed = {});

/// k uniform centers, then customer i is drawn from N(center[i mod k], sigma^2 I)
/// and clipped to the unit square.
CustomerLayout sample_customers_clustered(int count, int clusters, double sigma, Rng& rng);

/// round-half-up(rho * N) clustered points first, the rest uniform with
/// rejection against every earlier point.
CustomerLayout sample_customers_mixed(int count, double mix_ratio, int clusters, double sigma,
                                      double min_separation, Rng& rng, int attempts = 10);

int clustered_share(int count, double mix_ratio);

/// Dispatches on the configured family.
CustomerLayout sample_customers(const SpatialConfig& config, Rng& rng);

}  // namespace evgen
