#include "fermat/rng.hpp"

#include <cmath>

namespace fermat {

double CounterRng::normal() {
    // u1 in (0,1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t CounterRng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    std::uint64_t n = 0;
    double acc = 0.0;
    for (;;) {
        acc += -std::log(1.0 - uniform());
        if (acc >= mean) return n;
        ++n;
    }
}

}  // namespace fermat
