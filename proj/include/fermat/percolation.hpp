#pragma once

#include <cstdint>

#include "fermat/linalg.hpp"

namespace fermat {

struct MuEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t replicates = 0;
    double r = 0.0;
    double intensity = 0.0;
    double p = 1.0;
    std::size_t m = 2;
    std::size_t empties = 0;  // resampled empty-process draws
    Vec values;               // per-replicate normalized ratios
};

// Monte-Carlo estimate of the first-passage time constant: per replicate, a
// homogeneous PPP at the given intensity on the box
// [-r/2, 3r/2] x [-r/2, r/2]^{m-1}, endpoints 0 and r e1 appended, and the
// exact-mode ratio intensity^{(p-1)/m} l_p^p(0, r e1) / r.  The padding
// approximates the whole-space process; optimal paths rarely leave it.
MuEstimate estimate_mu(double p, std::size_t m, double r, double intensity,
                       std::size_t replicates, std::uint64_t seed);

}  // namespace fermat
