#pragma once

#include <span>
#include <vector>

#include "evgen/config.hpp"
#include "evgen/geometry.hpp"
#include "evgen/model.hpp"
#include "evgen/rng.hpp"

namespace evgen {

/// q_i ~ U(0.02Q, 0.30Q); when the total exceeds 3Q every demand is scaled by
/// 3Q / total.
std::vector<double> sample_demands(int count, double capacity, Rng& rng);

std::vector<double> sample_service_times(int count, double min_service, double max_service, Rng& rng);

/// Largest pairwise distance, 0 for fewer than two points.
double max_pairwise_distance(std::span<const Point> points);

/// B = r * clamp(kappa * d_max, R_min, R_max) for adaptive mode, or the
/// configured battery in fixed mode.
double adaptive_battery(std::span<const Point> customers, double consumption, const EnergyConfig& config);

/// Staggered windows: e_i = (i / N) * 0.3H, l_i = min(H, e_i + W), and windows
/// that hit H are shifted back so every width equals W = phi * H.
std::vector<TimeWindow> assign_time_windows(int count, double horizon, double width_fraction);

/// Alternative reading: e_i ~ U(0, H - W), l_i = e_i + W.
std::vector<TimeWindow> sample_time_windows(int count, double horizon, double width_fraction, Rng& rng);

}  // namespace evgen
