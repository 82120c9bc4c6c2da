#pragma once

#include <cstdint>
#include <string>

#include "fermat/density.hpp"
#include "fermat/linalg.hpp"

namespace fermat {

struct PointCloud {
    Mat points;                 // n x D
    std::size_t intrinsic_dim = 0;
    std::uint64_t seed = 0;
    std::string model_tag;

    std::size_t size() const { return points.rows(); }
    std::size_t ambient_dim() const { return points.cols(); }
    const double* point(std::size_t i) const { return points.row(i); }
};

// n i.i.d. draws by rejection against the uniform envelope of the domain;
// identical (model, n, seed) reproduce the cloud bit for bit.
PointCloud sample_iid(const DensityModel& model, std::size_t n, std::uint64_t seed);

// N ~ Poisson(intensity_n) points, then N i.i.d. draws from the model.
// Empty clouds are valid outputs.
PointCloud sample_ppp(const DensityModel& model, double intensity_n, std::uint64_t seed);

}  // namespace fermat
