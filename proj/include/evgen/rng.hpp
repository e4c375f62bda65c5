#pragma once

#include <cstdint>
#include <random>

#include "evgen/geometry.hpp"

namespace evgen {

/// Instance-level random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions are implemented here instead of using the
/// <random> distribution templates (those are implementation-defined), so a
/// seed produces the same draws with every standard library:
///
///   uniform()  = (next() >> 11) * 2^-53, in [0, 1)
///   normal()   = Box-Muller cosine branch, consumes exactly two uniforms
///   point()    = (uniform(), uniform()), x drawn first
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    double uniform();
    double uniform(double lo, double hi);
    double normal();
    Point uniform_point();

private:
    std::mt19937_64 engine_;
};

}  // namespace evgen
