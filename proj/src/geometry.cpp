#include "evgen/geometry.hpp"

#include <algorithm>

namespace evgen {

double euclidean_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point clip_unit_square(Point p) { return {std::clamp(p.x, 0.0, 1.0), std::clamp(p.y, 0.0, 1.0)}; }

bool in_unit_square(Point p) { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

}  // namespace evgen
