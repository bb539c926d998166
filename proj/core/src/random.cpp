#include "regsimplex/random.hpp"

#include <cmath>

namespace regsimplex {

double GaussianStream::uniform() noexcept {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double GaussianStream::next() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    do {
        a = 2.0 * uniform() - 1.0;
        b = 2.0 * uniform() - 1.0;
        s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
}

}  // namespace regsimplex
