#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermat/sampling.hpp"

using namespace fermat;

namespace {

Domain unit_box2() {
    Domain d;
    d.kind = DomainKind::Box;
    d.lo = {0.0, 0.0};
    d.hi = {1.0, 1.0};
    return d;
}

}  // namespace

TEST_CASE("fixed seed reproduces identical clouds") {
    const DensityModel m = DensityModel::disk_valley(0.25);
    const PointCloud a = sample_iid(m, 200, 99);
    const PointCloud b = sample_iid(m, 200, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t d = 0; d < 2; ++d) CHECK(a.points(i, d) == b.points(i, d));
}

TEST_CASE("single draw lands in the domain") {
    const DensityModel m = DensityModel::uniform(unit_box2());
    const PointCloud c = sample_iid(m, 1, 12345);
    REQUIRE(c.size() == 1);
    CHECK(m.domain().contains({c.points(0, 0), c.points(0, 1)}));
}

TEST_CASE("uniform box mean within 3 sigma of the center") {
    const DensityModel m = DensityModel::uniform(unit_box2());
    const std::size_t n = 1000;
    const PointCloud c = sample_iid(m, n, 7);
    for (std::size_t d = 0; d < 2; ++d) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += c.points(i, d);
        mean /= static_cast<double>(n);
        const double sigma = std::sqrt(1.0 / 12.0 / static_cast<double>(n));
        CHECK(std::abs(mean - 0.5) < 3.0 * sigma);
    }
}

TEST_CASE("linear density first moment matches 1/12") {
    Domain box;
    box.kind = DomainKind::Box;
    box.lo = {-0.5, -0.5};
    box.hi = {0.5, 0.5};
    const DensityModel m = DensityModel::linear(box, 1.0);
    const std::size_t n = 100000;
    const PointCloud c = sample_iid(m, n, 1);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += c.points(i, 0);
    mean /= static_cast<double>(n);
    // Var[x1] = E[x1^2] - (1/12)^2 with E[x1^2] = 1/12 under rho = 1 + x1.
    const double var = 1.0 / 12.0 - 1.0 / 144.0;
    const double sigma = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(mean - 1.0 / 12.0) < 3.0 * sigma);
}

TEST_CASE("every sampled point respects the density sandwich") {
    const DensityModel m = DensityModel::disk_valley(0.25);
    const PointCloud c = sample_iid(m, 500, 3);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double rho = m.eval({c.points(i, 0), c.points(i, 1)});
        CHECK(rho >= 1.0 / m.beta() - 1e-12);
        CHECK(rho <= m.beta() + 1e-12);
    }
}

TEST_CASE("poisson counts concentrate around the intensity") {
    const DensityModel m = DensityModel::uniform(unit_box2());
    const std::size_t reps = 200;
    double total = 0.0;
    for (std::size_t r = 0; r < reps; ++r) total += static_cast<double>(sample_ppp(m, 500.0, 3 + r).size());
    const double mean = total / static_cast<double>(reps);
    CHECK(std::abs(mean - 500.0) < 3.0 * std::sqrt(500.0 / static_cast<double>(reps)));
}

TEST_CASE("tiny intensity yields empty clouds without error") {
    const DensityModel m = DensityModel::uniform(unit_box2());
    std::size_t empties = 0;
    for (std::uint64_t s = 0; s < 50; ++s)
        if (sample_ppp(m, 0.01, s).size() == 0) ++empties;
    CHECK(empties > 40);  // P(N=0) = exp(-0.01) per draw
}

TEST_CASE("chi-square uniformity over a 10x10 grid at the 0.001 level") {
    const DensityModel m = DensityModel::uniform(unit_box2());
    const std::size_t n = 100000;
    const PointCloud c = sample_iid(m, n, 2024);
    std::vector<std::size_t> counts(100, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t gx = std::min<std::size_t>(9, static_cast<std::size_t>(c.points(i, 0) * 10.0));
        const std::size_t gy = std::min<std::size_t>(9, static_cast<std::size_t>(c.points(i, 1) * 10.0));
        ++counts[gx * 10 + gy];
    }
    const double expected = static_cast<double>(n) / 100.0;
    double stat = 0.0;
    for (const std::size_t k : counts) {
        const double d = static_cast<double>(k) - expected;
        stat += d * d / expected;
    }
    // chi2 quantile at 0.999 with 99 degrees of freedom.
    CHECK(stat < 148.230);
}

TEST_CASE("circle samples sit on the embedded circle") {
    const DensityModel m = DensityModel::sine_circle(0.5);
    const PointCloud c = sample_iid(m, 300, 5);
    const double r = 1.0 / (2.0 * M_PI);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double rad = std::hypot(c.points(i, 0), c.points(i, 1));
        CHECK(std::abs(rad - r) < 1e-12);
    }
    CHECK(c.intrinsic_dim == 1);
}
