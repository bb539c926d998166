#pragma once

#include <cstdint>
#include <random>

namespace regsimplex {

/// Standard normal deviates from a seeded std::mt19937_64.
///
/// The engine output sequence is fixed by the C++ standard, and the uniform
/// and Gaussian transforms are done here (53-bit mantissa fill, Marsaglia
/// polar method) instead of through std::*_distribution, whose algorithms are
/// implementation-defined. Same seed, same stream, on any conforming platform.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() noexcept;

    double next() noexcept;

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace regsimplex
