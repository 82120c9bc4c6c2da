#include "fermat/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fermat/errors.hpp"
#include "fermat/rng.hpp"

namespace fermat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LloydResult {
    std::vector<int> labels;
    double inertia = kInf;
    std::size_t iterations = 0;
    bool ok = false;
};

LloydResult lloyd_once(const Mat& x, std::size_t k, CounterRng& rng, std::size_t max_iter) {
    const std::size_t n = x.rows();
    const std::size_t dim = x.cols();
    LloydResult res;

    // k-means++ seeding.
    Mat centers(k, dim);
    Vec d2(n, kInf);
    std::size_t first = static_cast<std::size_t>(rng.below(n));
    for (std::size_t d = 0; d < dim; ++d) centers(0, d) = x(first, d);
    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dd = sq_dist(x.row(i), centers.row(c - 1), dim);
            d2[i] = std::min(d2[i], dd);
            total += d2[i];
        }
        std::size_t pick = n - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) { pick = i; break; }
            }
        } else {
            pick = static_cast<std::size_t>(rng.below(n));
        }
        for (std::size_t d = 0; d < dim; ++d) centers(c, d) = x(pick, d);
    }

    std::vector<int> labels(n, 0);
    std::vector<std::size_t> count(k, 0);
    Mat next(k, dim);
    for (std::size_t it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        for (std::size_t c = 0; c < k; ++c) {
            count[c] = 0;
            for (std::size_t d = 0; d < dim; ++d) next(c, d) = 0.0;
        }
        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = kInf;
            int arg = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double dd = sq_dist(x.row(i), centers.row(c), dim);
                if (dd < best) { best = dd; arg = static_cast<int>(c); }
            }
            labels[i] = arg;
            inertia += best;
            ++count[arg];
            for (std::size_t d = 0; d < dim; ++d) next(arg, d) += x(i, d);
        }
        for (std::size_t c = 0; c < k; ++c)
            if (count[c] == 0) return res;  // empty cluster: abort this restart

        double drift = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t d = 0; d < dim; ++d) {
                const double v = next(c, d) / static_cast<double>(count[c]);
                drift = std::max(drift, std::abs(v - centers(c, d)));
                centers(c, d) = v;
            }
        res.inertia = inertia;
        if (drift < 1e-9) break;
    }
    res.labels = std::move(labels);
    res.ok = true;
    return res;
}

}  // namespace

ClusterAssignment kmeans(const Mat& embedding, std::size_t k, std::uint64_t seed,
                         std::size_t max_iter, std::size_t restarts) {
    const std::size_t n = embedding.rows();
    if (k < 1 || k > n) throw Error("kmeans requires 1 <= k <= n");
    ClusterAssignment best;
    best.inertia = kInf;
    best.seed = seed;
    bool found = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        CounterRng rng(seed, r);
        const LloydResult res = lloyd_once(embedding, k, rng, max_iter);
        if (!res.ok) continue;
        if (!found || res.inertia < best.inertia) {
            best.labels = res.labels;
            best.inertia = res.inertia;
            best.iterations = res.iterations;
            found = true;
        }
    }
    if (!found) throw EmptyCluster("all restarts produced an empty cluster");
    return best;
}

double accuracy(const std::vector<int>& labels, const std::vector<int>& reference) {
    if (labels.size() != reference.size()) throw Error("label vectors differ in length");
    const std::size_t n = labels.size();
    int k = 0;
    for (const int l : labels) k = std::max(k, l + 1);
    for (const int l : reference) k = std::max(k, l + 1);
    if (k > 8) throw TooManyClusters("permutation search supports at most 8 clusters");

    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    // Confusion counts avoid an O(n k!) scan.
    std::vector<std::size_t> conf(static_cast<std::size_t>(k) * k, 0);
    for (std::size_t i = 0; i < n; ++i)
        ++conf[static_cast<std::size_t>(labels[i]) * k + reference[i]];
    std::size_t best = 0;
    do {
        std::size_t match = 0;
        for (int c = 0; c < k; ++c) match += conf[static_cast<std::size_t>(c) * k + perm[c]];
        best = std::max(best, match);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return static_cast<double>(best) / static_cast<double>(n);
}

Mat euclidean_pairwise(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    const std::size_t dim = cloud.ambient_dim();
    Mat d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = euclid(cloud.point(i), cloud.point(j), dim);
            d(i, j) = v;
            d(j, i) = v;
        }
    return d;
}

namespace {

Mat embedding_of(const SpectralDecomposition& dec, bool row_normalize) {
    const std::size_t n = dec.eigenvectors.rows();
    const std::size_t r = dec.eigenvectors.cols();
    Mat emb(n, r);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j) emb(i, j) = dec.eigenvectors(i, j);
    if (row_normalize) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < r; ++j) s += emb(i, j) * emb(i, j);
            s = std::sqrt(s);
            if (s > 0.0)
                for (std::size_t j = 0; j < r; ++j) emb(i, j) /= s;
        }
    }
    return emb;
}

FermatParams::Mode resolve_mode(const PipelineOptions& opts, std::size_t n) {
    if (!opts.auto_mode) return opts.mode;
    return n <= opts.exact_cap ? FermatParams::Mode::Exact : FermatParams::Mode::Knn;
}

}  // namespace

PipelineResult spectral_cluster_fd(const PointCloud& cloud, double p, double s, double h,
                                   std::size_t r, std::size_t k, std::uint64_t seed,
                                   const PipelineOptions& opts) {
    const std::size_t n = cloud.size();
    FermatParams params;
    params.p = p;
    params.m = cloud.intrinsic_dim;
    params.mode = resolve_mode(opts, n);
    params.k = opts.knn_k;

    const DistanceMatrix raw = fermat_pairwise(cloud, params);
    Mat kernel_arg;
    if (opts.raw_lp) {
        kernel_arg = raw.values;
        for (double& v : kernel_arg.data()) v = std::pow(v, 1.0 / p);
    } else {
        kernel_arg = normalize_fermat(raw, n, params).values;
    }

    const SparseWeightedGraph w = build_weights(kernel_arg, h, params.m);
    const OperatorMatrix lap = laplacian_ps(w, s);
    EigOptions eopts;
    eopts.dense_cutoff = opts.dense_cutoff;
    // A disconnected kernel graph is the easy case for clustering: component
    // indicators span the zero eigenspace.
    eopts.require_connected = false;
    const SpectralDecomposition dec = eig_smallest(lap, r, eopts);

    PipelineResult res;
    res.h = h;
    res.spectrum = dec;
    res.embedding = embedding_of(dec, opts.row_normalize);
    res.labels = kmeans(res.embedding, k, seed).labels;
    return res;
}

PipelineResult spectral_cluster_dn(const PointCloud& cloud, double q, double j, double h,
                                   std::size_t r, std::size_t k, std::uint64_t seed,
                                   const PipelineOptions& opts) {
    const Mat dist = euclidean_pairwise(cloud);
    const std::size_t m = cloud.intrinsic_dim;
    const SparseWeightedGraph w = build_weights(dist, h, m);
    const OperatorMatrix lap = laplacian_dn(w, q, j);
    EigOptions eopts;
    eopts.dense_cutoff = opts.dense_cutoff;
    eopts.require_connected = false;
    const SpectralDecomposition dec = eig_smallest(lap, r, eopts);

    PipelineResult res;
    res.h = h;
    res.spectrum = dec;
    res.embedding = embedding_of(dec, opts.row_normalize);
    res.labels = kmeans(res.embedding, k, seed).labels;
    return res;
}

}  // namespace fermat
