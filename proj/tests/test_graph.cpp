#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fermat/density.hpp"
#include "fermat/errors.hpp"
#include "fermat/graph.hpp"
#include "fermat/rng.hpp"
#include "oracles.hpp"

using namespace fermat;

namespace {

Mat two_point_distances(double d) {
    Mat m(2, 2, 0.0);
    m(0, 1) = d;
    m(1, 0) = d;
    return m;
}

}  // namespace

TEST_CASE("kernel values and closure at the boundary") {
    CHECK(kernel_eta(0.5, 2) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
    CHECK(kernel_eta(1.0, 2) == doctest::Approx(1.0 / M_PI).epsilon(1e-14));
    CHECK(kernel_eta(1.2, 2) == 0.0);
    CHECK(kernel_eta(1.2, 5) == 0.0);
    CHECK_THROWS_AS(kernel_eta(-0.1, 2), NegativeArgument);
}

TEST_CASE("weight construction on two points") {
    const double h = 0.4;
    const SparseWeightedGraph g = build_weights(two_point_distances(0.5 * h), h, 2);
    const double expected = 1.0 / (2.0 * h * h * M_PI);
    CHECK(g.degrees()[0] == doctest::Approx(2.0 * expected).epsilon(1e-14));  // self-loop + edge
    CHECK(g.includes_self_loops());

    CHECK_THROWS_AS(build_weights(two_point_distances(2.0 * h), h, 2), EmptyGraph);
}

TEST_CASE("degrees equal an independent dense recomputation") {
    const SparseWeightedGraph g = oracles::random_graph(20, 9);
    const Mat w = g.dense();
    for (std::size_t i = 0; i < 20; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < 20; ++j) s += w(i, j);
        CHECK(std::abs(s - g.degrees()[i]) < 1e-12);
    }
}

TEST_CASE("q = 1 gives the unnormalized Laplacian") {
    const SparseWeightedGraph g = oracles::random_graph(8, 21);
    const Mat l = laplacian_jqr(g, 2.0, 1.0, 0.0).dense();
    const Mat w = g.dense();
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            const double expected = (i == j ? g.degrees()[i] : 0.0) - w(i, j);
            CHECK(std::abs(l(i, j) - expected) < 1e-12);
        }
}

TEST_CASE("the (2,2,0) triple is the reweighted random-walk Laplacian") {
    const SparseWeightedGraph g = oracles::random_graph(3, 33);
    const Mat l = laplacian_jqr(g, 2.0, 2.0, 0.0).dense();
    // Independent dense 3x3 route.
    const Mat w = g.dense();
    Vec d = g.degrees();
    Mat wq(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) wq(i, j) = w(i, j) / (d[i] * d[i] * d[j] * d[j]);
    Vec dq(3, 0.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) dq[i] += wq(i, j);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const double expected = (i == j ? 1.0 : 0.0) - wq(i, j) / dq[i];
            CHECK(std::abs(l(i, j) - expected) < 1e-12);
        }
    // Rows of the reweighted walk matrix sum to one.
    const Vec rs = laplacian_jqr(g, 2.0, 2.0, 0.0).row_sums();
    for (const double v : rs) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("the (2,3,1) triple is symmetric") {
    const SparseWeightedGraph g = oracles::random_graph(10, 5);
    const Mat l = laplacian_jqr(g, 2.0, 3.0, 1.0).dense();
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(l(i, j) - l(j, i)) < 1e-12);
}

TEST_CASE("fermat normalization collapses for equal degrees and s = 2") {
    const SparseWeightedGraph g = oracles::random_graph(6, 12);
    // s = 2: exponents vanish, so L is the plain random walk Laplacian.
    const Mat l2 = laplacian_ps(g, 2.0).dense();
    const Mat w = g.dense();
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            const double expected = (i == j ? 1.0 : 0.0) - w(i, j) / g.degrees()[i];
            CHECK(std::abs(l2(i, j) - expected) < 1e-11);
        }

    // Complete graph with constant weights: same Laplacian for every s.
    std::vector<std::size_t> is, js;
    Vec ws;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = i; j < 5; ++j) {
            is.push_back(i);
            js.push_back(j);
            ws.push_back(0.7);
        }
    const SparseWeightedGraph complete = SparseWeightedGraph::from_pairs(5, is, js, ws, true);
    const Mat a = laplacian_ps(complete, 0.5).dense();
    const Mat b = laplacian_ps(complete, 3.0).dense();
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(std::abs(a(i, j) - b(i, j)) < 1e-12);

    // Two-node case: [[a, -a], [-a, a]] with a in (0, 1].
    const SparseWeightedGraph two = SparseWeightedGraph::from_pairs(
        2, {0, 0, 1}, {1, 0, 1}, {0.8, 0.3, 0.3}, true);
    const Mat l = laplacian_ps(two, 1.3).dense();
    CHECK(l(0, 0) == doctest::Approx(0.8 / 1.1).epsilon(1e-12));
    CHECK(l(0, 1) == doctest::Approx(-0.8 / 1.1).epsilon(1e-12));
    CHECK(l(0, 0) > 0.0);
    CHECK(l(0, 0) <= 1.0);
}

TEST_CASE("rows of the ps walk matrix are stochastic") {
    const SparseWeightedGraph g = oracles::random_graph(15, 77);
    for (const double s : {0.0, 1.0, 2.0, 2.5}) {
        const Vec rs = laplacian_ps(g, s).row_sums();
        for (const double v : rs) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("dirichlet form identities") {
    const double h = 0.3;
    const std::size_t m = 2;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SparseWeightedGraph g = oracles::random_graph(10, 100 + seed);
        const std::size_t n = g.size();
        CounterRng rng(seed, 1);
        Vec u(n), v(n), w2(n);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = rng.normal();
            v[i] = rng.normal();
            w2[i] = rng.normal();
        }
        // Constant function has zero energy against anything.
        const Vec ones(n, 1.0);
        CHECK(std::abs(dirichlet_form(g, h, m, n, ones, v)) < 1e-14);

        // b(u,u) = <Delta_rw u, u>_m with the degree mass.
        const OperatorMatrix rw = rw_laplacian(g, h, m);
        const Vec lu = rw.apply(u);
        double inner = 0.0;
        for (std::size_t i = 0; i < n; ++i) inner += g.degrees()[i] * lu[i] * u[i];
        inner /= static_cast<double>(n);
        const double b = dirichlet_form(g, h, m, n, u, u);
        CHECK(std::abs(b - inner) < 1e-10 * std::max(1.0, std::abs(b)));

        // Bilinearity.
        const double a1 = 0.7, a2 = -1.3;
        Vec combo(n);
        for (std::size_t i = 0; i < n; ++i) combo[i] = a1 * u[i] + a2 * w2[i];
        const double lhs = dirichlet_form(g, h, m, n, combo, v);
        const double rhs = a1 * dirichlet_form(g, h, m, n, u, v) +
                           a2 * dirichlet_form(g, h, m, n, w2, v);
        CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("random walk laplacian basics") {
    // Two nodes, no self-loops, h chosen so the scale is one.
    const SparseWeightedGraph two =
        SparseWeightedGraph::from_pairs(2, {0}, {1}, {0.4}, false);
    const double h = std::sqrt(2.0 * 4.0);  // m = 2
    const Mat l = rw_laplacian(two, h, 2).dense();
    CHECK(l(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));

    const SparseWeightedGraph g = oracles::random_graph(12, 8);
    const OperatorMatrix rw = rw_laplacian(g, 0.5, 2);
    const Vec rs = rw.row_sums();
    for (const double v : rs) CHECK(std::abs(v) < 1e-10);

#ifdef FERMAT_HAVE_EIGEN
    // Spectrum of the unscaled walk Laplacian lies in [0, 2].
    const Vec evals = oracles::dense_pencil_eigenvalues(g, g.degrees(), 12);
    CHECK(evals.front() > -1e-10);
    CHECK(evals.back() < 2.0 + 1e-10);
#endif
}

TEST_CASE("ncut on the named examples") {
    const SparseWeightedGraph two = SparseWeightedGraph::from_pairs(2, {0}, {1}, {1.0}, false);
    CHECK(ncut(two, {0, 1}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ncut(two, {0, 0}), EmptySide);

    const SparseWeightedGraph path =
        SparseWeightedGraph::from_pairs(3, {0, 1}, {1, 2}, {1.0, 1.0}, false);
    CHECK(ncut(path, {0, 1, 1}) == doctest::Approx(1.0));

    // Two disconnected cliques split along the components.
    const SparseWeightedGraph cliques = SparseWeightedGraph::from_pairs(
        4, {0, 2}, {1, 3}, {1.0, 1.0}, false);
    CHECK(ncut(cliques, {0, 0, 1, 1}) == doctest::Approx(0.0));
}

TEST_CASE("bandwidth rule value and monotonicity") {
    const double h = bandwidth_rule(10000, 2, 0.05, 1.0, 1.0, 1.0);
    CHECK(h == doctest::Approx(4.0 * std::pow(5000.0, -0.5 * (1.0 / 3.0 - 0.05))).epsilon(1e-12));
    double prev = 1e300;
    for (std::size_t n = 100; n <= 100000; n *= 10) {
        const double v = bandwidth_rule(n, 2, 0.05, 1.5, 2.0, 1.1);
        CHECK(v < prev);
        prev = v;
    }
    // Doubling beta rescales through both factors.
    const double h1 = bandwidth_rule(5000, 2, 0.05, 1.5, 1.0, 1.0);
    const double h2 = bandwidth_rule(5000, 2, 0.05, 1.5, 2.0, 1.0);
    const double expected = h1 * std::pow(2.0, 0.25) *
                            std::pow(2.0, -0.5 * (1.0 / 3.0 - 0.05));
    CHECK(h2 == doctest::Approx(expected).epsilon(1e-12));
    CHECK_THROWS_AS(bandwidth_rule(100, 2, 0.2, 2.0, 1.0, 1.0), EpsOutOfRange);
    CHECK_THROWS_AS(bandwidth_rule(100, 2, -0.1, 2.0, 1.0, 1.0), EpsOutOfRange);
}

TEST_CASE("degrees track the sampling density on a uniform square") {
    // Kernel degrees approximate rho^p = 1 up to O(h) plus boundary loss.
    const DensityModel model = DensityModel::uniform([] {
        Domain d;
        d.kind = DomainKind::Box;
        d.lo = {0.0, 0.0};
        d.hi = {1.0, 1.0};
        return d;
    }());
    const PointCloud cloud = sample_iid(model, 900, 4);
    Mat dist(900, 900, 0.0);
    for (std::size_t i = 0; i < 900; ++i)
        for (std::size_t j = i + 1; j < 900; ++j) {
            const double v = euclid(cloud.point(i), cloud.point(j), 2);
            dist(i, j) = v;
            dist(j, i) = v;
        }
    const double h = 0.15;
    const SparseWeightedGraph g = build_weights(dist, h, 2);
    // Interior points only; boundary balls are truncated.
    std::vector<double> devs;
    for (std::size_t i = 0; i < 900; ++i) {
        const double x = cloud.points(i, 0), y = cloud.points(i, 1);
        if (x < h || x > 1 - h || y < h || y > 1 - h) continue;
        devs.push_back(std::abs(g.degrees()[i] - 1.0));
    }
    REQUIRE(devs.size() > 100);
    std::sort(devs.begin(), devs.end());
    CHECK(devs[devs.size() / 2] < 0.2);  // O(h) band with Monte-Carlo noise at n = 900
}
