#include "evgen/rng.hpp"

#include <cmath>
#include <numbers>

namespace evgen {

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Point Rng::uniform_point() {
    const double x = uniform();
    const double y = uniform();
    return {x, y};
}

}  // namespace evgen
