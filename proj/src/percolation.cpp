#include "fermat/percolation.hpp"

#include <cmath>

#include "fermat/errors.hpp"
#include "fermat/metric.hpp"
#include "fermat/rng.hpp"
#include "fermat/sampling.hpp"

namespace fermat {

MuEstimate estimate_mu(double p, std::size_t m, double r, double intensity,
                       std::size_t replicates, std::uint64_t seed) {
    if (!(r > 0.0)) throw Error("estimate_mu requires r > 0");
    if (replicates < 2) throw Error("estimate_mu requires at least 2 replicates");
    double volume = 2.0 * r;
    for (std::size_t d = 1; d < m; ++d) volume *= r;
    if (intensity * volume < 100.0)
        throw Error("expected point count below 100; raise intensity or r");

    MuEstimate est;
    est.p = p;
    est.m = m;
    est.r = r;
    est.intensity = intensity;
    est.replicates = replicates;
    est.values.reserve(replicates);

    FermatParams params;
    params.p = p;
    params.m = m;
    params.mode = FermatParams::Mode::Exact;

    Vec origin(m, 0.0), target(m, 0.0);
    target[0] = r;
    const double norm = std::pow(intensity, (p - 1.0) / static_cast<double>(m));

    for (std::size_t rep = 0; rep < replicates; ++rep) {
        PointCloud cloud;
        for (std::size_t attempt = 0;; ++attempt) {
            CounterRng rng(seed, rep + attempt * replicates);
            const std::size_t n = rng.poisson(intensity * volume);
            if (n == 0) {
                ++est.empties;
                continue;
            }
            cloud.points = Mat(n, m);
            cloud.intrinsic_dim = m;
            for (std::size_t i = 0; i < n; ++i) {
                cloud.points(i, 0) = rng.uniform(-0.5 * r, 1.5 * r);
                for (std::size_t d = 1; d < m; ++d)
                    cloud.points(i, d) = rng.uniform(-0.5 * r, 0.5 * r);
            }
            break;
        }
        const double lpp = fermat_between(cloud, params, origin, target);
        est.values.push_back(norm * lpp / r);
    }

    double mean = 0.0;
    for (const double v : est.values) mean += v;
    mean /= static_cast<double>(replicates);
    double var = 0.0;
    for (const double v : est.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(replicates - 1);
    est.mean = mean;
    est.stderr_ = std::sqrt(var / static_cast<double>(replicates));
    return est;
}

}  // namespace fermat
