#pragma once

#include <cmath>

namespace evgen {

/// Absolute tolerance for every feasibility comparison on times, energies
/// and distances.
inline constexpr double kTolerance = 1e-9;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

double euclidean_distance(Point a, Point b);

/// Vehicles travel at unit speed, so travel time equals distance.
inline double travel_time(double distance) { return distance; }

Point clip_unit_square(Point p);

bool in_unit_square(Point p);

}  // namespace evgen
