#pragma once

#include <span>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/geometry.hpp"
#include "evgen/model.hpp"
#include "evgen/rng.hpp"

namespace evgen {

enum class StationOrigin { midpoint, depot_ray, top_up };

/// Candidate near the midpoint of every customer pair farther apart than
/// midpoint_threshold * R, pairs taken in ascending (i, j) order. Each
/// candidate draws a perturbation in [-delta, delta]^2 (x then y) and is
/// clipped to the unit square.
std::vector<Point> candidate_midpoint_stations(std::span<const Point> customers, double range, double delta,
                                               Rng& rng, const StationConfig& rules = {});

/// For customers (in index order) farther than depot_threshold * R from the
/// depot whose nearest station, counting earlier ray insertions, is farther
/// than nearest_station_threshold * R: a station ray_fraction * R along the
/// depot-customer ray.
std::vector<Point> candidate_depot_ray_stations(Point depot, std::span<const Point> customers,
                                                std::span<const Point> existing, double range,
                                                const StationConfig& rules = {});

/// Greedy pass in candidate order. A candidate survives when it is at least
/// station_separation * R from every station kept so far (including `kept`)
/// and at least customer_clearance from every customer. Returns survivors only.
std::vector<Point> filter_stations(std::span<const Point> candidates, std::span<const Point> customers, double range,
                                   std::span<const Point> kept = {}, const StationConfig& rules = {});

struct TopUpResult {
    std::vector<Point> added;
    int relaxed = 0;  // stations placed after the separation rule was dropped
};

/// Uniform samples until `kept` plus the additions reach target_count.
TopUpResult top_up_stations(std::span<const Point> kept, int target_count, std::span<const Point> customers,
                            double range, Rng& rng, const StationConfig& rules = {});

struct Infrastructure {
    std::vector<Node> stations;  // ids N+1 .. N+|S|
    std::vector<StationOrigin> origins;
    int midpoint_candidates = 0;
    int ray_candidates = 0;
    int truncated = 0;
    int relaxed = 0;
};

/// midpoint candidates -> filter -> ray candidates against the survivors ->
/// filter of the ray insertions -> greedy coverage truncation to the target ->
/// top up. Station ids follow the order of selection.
Infrastructure build_infrastructure(Point depot, std::span<const Point> customers, const StationConfig& config,
                                    double range, Rng& rng);

}  // namespace evgen
