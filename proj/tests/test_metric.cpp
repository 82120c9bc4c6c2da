#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fermat/errors.hpp"
#include "fermat/metric.hpp"
#include "oracles.hpp"

using namespace fermat;

namespace {

PointCloud cloud_from(const std::vector<Vec>& pts) {
    PointCloud c;
    c.points = Mat(pts.size(), pts[0].size());
    c.intrinsic_dim = pts[0].size();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t d = 0; d < pts[0].size(); ++d) c.points(i, d) = pts[i][d];
    return c;
}

}  // namespace

TEST_CASE("collinear triple routes through the midpoint at p = 2") {
    const PointCloud c = cloud_from({{0.0}, {0.5}, {1.0}});
    FermatParams params;
    params.p = 2.0;
    params.m = 1;
    const Vec d = fermat_sssp(c, params, 0);
    CHECK(d[2] == doctest::Approx(0.5).epsilon(1e-15));
    const Mat fw = oracles::floyd_warshall(c.points, 2.0);
    CHECK(fw(0, 2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("p = 1 reduces to the Euclidean distance for every pair") {
    const PointCloud c = oracles::random_cloud(80, 2, 11);
    FermatParams params;
    params.p = 1.0;
    params.m = 2;
    const DistanceMatrix dm = fermat_pairwise(c, params);
    for (std::size_t i = 0; i < 80; ++i)
        for (std::size_t j = 0; j < 80; ++j) {
            const double e = euclid(c.point(i), c.point(j), 2);
            CHECK(std::abs(dm.values(i, j) - e) < 1e-12);
        }
}

TEST_CASE("two-candidate detour example at p = 3") {
    const PointCloud c = cloud_from({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.3}});
    FermatParams params;
    params.p = 3.0;
    params.m = 2;
    // Enumerate the two candidate paths directly.
    const double leg = std::pow(0.5 * 0.5 + 0.3 * 0.3, 1.5);
    const double expected = std::min(1.0, 2.0 * leg);
    CHECK(expected == doctest::Approx(0.39650474).epsilon(1e-6));
    const Vec d = fermat_sssp(c, params, 0);
    CHECK(d[1] == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("two points give the pth power of their separation") {
    const PointCloud c = cloud_from({{0.0, 0.0}, {0.7, 0.0}});
    for (const double p : {1.0, 1.5, 2.0, 3.0}) {
        FermatParams params;
        params.p = p;
        params.m = 2;
        const DistanceMatrix dm = fermat_pairwise(c, params);
        CHECK(dm.values(0, 1) == doctest::Approx(std::pow(0.7, p)).epsilon(1e-14));
        CHECK(dm.values(0, 0) == 0.0);
    }
}

TEST_CASE("exact pairwise equals the Floyd-Warshall oracle") {
    for (const double p : {1.0, 1.5, 2.0, 3.0}) {
        const PointCloud c = oracles::random_cloud(50, 2, 100 + static_cast<int>(10 * p));
        FermatParams params;
        params.p = p;
        params.m = 2;
        const DistanceMatrix dm = fermat_pairwise(c, params);
        const Mat fw = oracles::floyd_warshall(c.points, p);
        double worst = 0.0;
        for (std::size_t i = 0; i < 50; ++i)
            for (std::size_t j = 0; j < 50; ++j)
                worst = std::max(worst, std::abs(dm.values(i, j) - fw(i, j)));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("knn pairwise agrees with exact on nearly all pairs") {
    const PointCloud c = oracles::random_cloud(400, 2, 17);
    FermatParams exact{2.0, 2, FermatParams::Mode::Exact, 0};
    FermatParams knn{2.0, 2, FermatParams::Mode::Knn, 0};
    const DistanceMatrix de = fermat_pairwise(c, exact);
    const DistanceMatrix dk = fermat_pairwise(c, knn);
    std::size_t equal = 0, total = 0;
    for (std::size_t i = 0; i < 400; ++i)
        for (std::size_t j = i + 1; j < 400; ++j) {
            ++total;
            if (std::abs(de.values(i, j) - dk.values(i, j)) < 1e-12) ++equal;
            CHECK(dk.values(i, j) >= de.values(i, j) - 1e-12);  // pruning never shortens
        }
    CHECK(static_cast<double>(equal) / static_cast<double>(total) >= 0.99);
}

TEST_CASE("knn graph edge cases") {
    const PointCloud path = cloud_from({{0.0}, {1.0}, {2.1}});
    const SparseWeightedGraph g1 = knn_graph(path, 1);
    // Path graph: node 1 is everyone's nearest neighbor.
    CHECK(g1.entry_count() == 4);  // two undirected edges
    const PointCloud c = oracles::random_cloud(30, 2, 23);
    const SparseWeightedGraph gfull = knn_graph(c, 29);
    CHECK(gfull.entry_count() == 30 * 29);
}

TEST_CASE("grid-accelerated knn matches brute force") {
    const PointCloud c = oracles::random_cloud(2500, 2, 31);  // above the brute-force cutoff
    const std::size_t k = 10;
    const SparseWeightedGraph g = knn_graph(c, k);
    // Brute-force oracle: recompute each point's kth neighbor distance and
    // check that each of its k nearest appears as a graph edge.
    std::vector<std::pair<double, std::size_t>> cand(c.size());
    for (std::size_t i = 0; i < c.size(); i += 97) {
        for (std::size_t j = 0; j < c.size(); ++j)
            cand[j] = {j == i ? 1e300 : sq_dist(c.point(i), c.point(j), 2), j};
        std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
        for (std::size_t t = 0; t < k; ++t) {
            bool found = false;
            for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e)
                if (g.col(e) == cand[t].second) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("normalization scale and double-normalization guard") {
    const PointCloud c = oracles::random_cloud(100, 2, 3);
    FermatParams p3{3.0, 2, FermatParams::Mode::Exact, 0};
    const DistanceMatrix raw = fermat_pairwise(c, p3);
    const DistanceMatrix norm = normalize_fermat(raw, 100, p3);
    CHECK(norm.scale == doctest::Approx(100.0).epsilon(1e-14));
    CHECK(norm.values(0, 1) == doctest::Approx(raw.values(0, 1) * 100.0).epsilon(1e-14));
    CHECK_THROWS_AS(normalize_fermat(norm, 100, p3), DoubleNormalization);

    FermatParams p1{1.0, 2, FermatParams::Mode::Exact, 0};
    CHECK(normalize_fermat(raw, 100, p1).scale == doctest::Approx(1.0));
    FermatParams p2{2.0, 2, FermatParams::Mode::Exact, 0};
    CHECK(normalize_fermat(raw, 10000, p2).scale == doctest::Approx(100.0).epsilon(1e-14));
}

TEST_CASE("metric axioms for the p-th root values") {
    for (const double p : {1.0, 1.5, 2.0, 3.0}) {
        const PointCloud c = oracles::random_cloud(60, 2, 7 + static_cast<int>(p));
        FermatParams params{p, 2, FermatParams::Mode::Exact, 0};
        const DistanceMatrix dm = fermat_pairwise(c, params);
        CounterRng rng(55, 0);
        for (int t = 0; t < 3000; ++t) {
            const std::size_t i = rng.below(60), j = rng.below(60), k = rng.below(60);
            const double dij = std::pow(dm.values(i, j), 1.0 / p);
            const double dik = std::pow(dm.values(i, k), 1.0 / p);
            const double dkj = std::pow(dm.values(k, j), 1.0 / p);
            CHECK(dij <= dik + dkj + 1e-9);
        }
        // Direct hop is always feasible.
        for (std::size_t i = 0; i < 60; ++i)
            for (std::size_t j = 0; j < 60; ++j)
                CHECK(dm.values(i, j) <=
                      std::pow(sq_dist(c.point(i), c.point(j), 2), 0.5 * p) + 1e-12);
    }
}

TEST_CASE("inserting a point never increases any distance") {
    FermatParams params{2.0, 2, FermatParams::Mode::Exact, 0};
    PointCloud c = oracles::random_cloud(40, 2, 71);
    DistanceMatrix before = fermat_pairwise(c, params);
    const PointCloud extra = oracles::random_cloud(41, 2, 72);
    PointCloud grown;
    grown.points = Mat(41, 2);
    grown.intrinsic_dim = 2;
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t d = 0; d < 2; ++d) grown.points(i, d) = c.points(i, d);
    grown.points(40, 0) = extra.points(40, 0);
    grown.points(40, 1) = extra.points(40, 1);
    const DistanceMatrix after = fermat_pairwise(grown, params);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 40; ++j)
            CHECK(after.values(i, j) <= before.values(i, j) + 1e-12);
}

TEST_CASE("endpoint augmentation lets paths route through the cloud") {
    const PointCloud c = cloud_from({{0.5, 0.0}});
    FermatParams params{2.0, 2, FermatParams::Mode::Exact, 0};
    // 0 -> (0.5, 0) -> 1 costs 0.5; the direct hop costs 1.
    const double d = fermat_between(c, params, {0.0, 0.0}, {1.0, 0.0});
    CHECK(d == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("size cap and disconnection are loud") {
    const PointCloud c = oracles::random_cloud(30, 2, 1);
    FermatParams params{2.0, 2, FermatParams::Mode::Exact, 0};
    CHECK_THROWS_AS(fermat_pairwise(c, params, 10), SizeCapExceeded);

    // Two clusters separated by a gulf; k = 1 and the doubled k = 2 both
    // stay inside the clusters.
    std::vector<Vec> pts;
    for (int i = 0; i < 30; ++i) {
        const double t = static_cast<double>(i) * 1e-3;
        pts.push_back({t, 0.0});
        pts.push_back({t + 1000.0, 0.0});
    }
    const PointCloud split = cloud_from(pts);
    FermatParams knn{2.0, 2, FermatParams::Mode::Knn, 1};
    CHECK_THROWS_AS(fermat_pairwise(split, knn), DisconnectedGraph);
}
