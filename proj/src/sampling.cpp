#include "fermat/sampling.hpp"

#include <cmath>

#include "fermat/errors.hpp"
#include "fermat/rng.hpp"

namespace fermat {

namespace {

Vec propose_uniform(const Domain& d, CounterRng& rng) {
    switch (d.kind) {
        case DomainKind::Box: {
            Vec x(d.lo.size());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.uniform(d.lo[i], d.hi[i]);
            return x;
        }
        case DomainKind::Disk: {
            // Rejection from the bounding square keeps the draw exact.
            for (;;) {
                const double a = rng.uniform(-1.0, 1.0);
                const double b = rng.uniform(-1.0, 1.0);
                if (a * a + b * b <= 1.0) return {a, b};
            }
        }
        case DomainKind::Circle: {
            const double t = rng.uniform();
            const double r = 1.0 / (2.0 * M_PI);
            return {r * std::cos(2.0 * M_PI * t), r * std::sin(2.0 * M_PI * t)};
        }
    }
    throw Error("unknown domain");
}

void fill_points(const DensityModel& model, std::size_t n, CounterRng& rng, Mat& out) {
    const double rho_max = model.max_density();
    for (std::size_t i = 0; i < n; ++i) {
        for (;;) {
            const Vec x = propose_uniform(model.domain(), rng);
            const double rho = model.eval(x);
            if (rho > rho_max * (1.0 + 1e-12))
                throw NonfiniteDensity("proposal exceeds the rejection envelope");
            if (rng.uniform() * rho_max <= rho) {
                for (std::size_t d = 0; d < x.size(); ++d) out(i, d) = x[d];
                break;
            }
        }
    }
}

}  // namespace

PointCloud sample_iid(const DensityModel& model, std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    PointCloud cloud;
    cloud.points = Mat(n, model.domain().ambient_dim());
    cloud.intrinsic_dim = model.domain().intrinsic_dim();
    cloud.seed = seed;
    cloud.model_tag = model.tag();
    fill_points(model, n, rng, cloud.points);
    return cloud;
}

PointCloud sample_ppp(const DensityModel& model, double intensity_n, std::uint64_t seed) {
    if (!(intensity_n > 0.0)) throw Error("sample_ppp requires intensity_n > 0");
    CounterRng rng(seed, 0);
    const std::size_t n = rng.poisson(intensity_n);
    PointCloud cloud;
    cloud.points = Mat(n, model.domain().ambient_dim());
    cloud.intrinsic_dim = model.domain().intrinsic_dim();
    cloud.seed = seed;
    cloud.model_tag = model.tag() + ":ppp";
    fill_points(model, n, rng, cloud.points);
    return cloud;
}

}  // namespace fermat
