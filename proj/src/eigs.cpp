#include "fermat/eigs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fermat/errors.hpp"
#include "fermat/rng.hpp"

namespace fermat {

namespace {

double hypot2(double a, double b) { return std::sqrt(a * a + b * b); }

// Householder reduction of a symmetric matrix to tridiagonal form,
// accumulating the orthogonal transform in z when accumulate is set.
void tred2(Mat& z, Vec& d, Vec& e, bool accumulate) {
    const std::size_t n = z.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t ii = n - 1; ii >= 1; --ii) {
        const std::size_t i = ii;
        const std::size_t l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k <= l; ++k) scale += std::abs(z(i, k));
            if (scale == 0.0) {
                e[i] = z(i, l);
            } else {
                for (std::size_t k = 0; k <= l; ++k) {
                    z(i, k) /= scale;
                    h += z(i, k) * z(i, k);
                }
                double f = z(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                z(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j <= l; ++j) {
                    if (accumulate) z(j, i) = z(i, j) / h;
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
                    for (std::size_t k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
                    e[j] = g / h;
                    f += e[j] * z(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j <= l; ++j) {
                    f = z(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (std::size_t k = 0; k <= j; ++k)
                        z(j, k) -= f * e[k] + g * z(i, k);
                }
            }
        } else {
            e[i] = z(i, l);
        }
        d[i] = h;
    }
    if (accumulate) d[0] = 0.0;
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (accumulate) {
            const std::size_t l = i;
            if (d[i] != 0.0) {
                for (std::size_t j = 0; j < l; ++j) {
                    double g = 0.0;
                    for (std::size_t k = 0; k < l; ++k) g += z(i, k) * z(k, j);
                    for (std::size_t k = 0; k < l; ++k) z(k, j) -= g * z(k, i);
                }
            }
            d[i] = z(i, i);
            z(i, i) = 1.0;
            for (std::size_t j = 0; j < l; ++j) z(j, i) = z(i, j) = 0.0;
        } else {
            d[i] = z(i, i);
        }
    }
}

// Implicit-shift QL on the tridiagonal (d, e); z accumulates eigenvectors
// when accumulate is set (z must hold the tred2 transform or the identity).
void tql2(Vec& d, Vec& e, Mat& z, bool accumulate) {
    const std::size_t n = d.size();
    if (n == 0) return;
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        std::size_t iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 64) throw NotConverged("ql iteration exceeded 64 sweeps");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = hypot2(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t ii = m; ii-- > l;) {
                    const std::size_t i = ii;
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = hypot2(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (accumulate) {
                        for (std::size_t k = 0; k < n; ++k) {
                            f = z(k, i + 1);
                            z(k, i + 1) = s * z(k, i) + c * f;
                            z(k, i) = c * z(k, i) - s * f;
                        }
                    }
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    // Ascending order, vectors permuted alongside.
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
    Vec ds(n);
    for (std::size_t i = 0; i < n; ++i) ds[i] = d[idx[i]];
    d = ds;
    if (accumulate) {
        Mat zs(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) zs(i, j) = z(i, idx[j]);
        z = zs;
    }
}

}  // namespace

void sym_eig_dense(const Mat& a, Vec& evals, Mat& evecs) {
    evecs = a;
    Vec e;
    tred2(evecs, evals, e, true);
    tql2(evals, e, evecs, true);
}

void sym_eig_values(const Mat& a, Vec& evals) {
    Mat z = a;
    Vec e;
    tred2(z, evals, e, false);
    tql2(evals, e, z, false);
}

void lanczos_smallest(const std::function<Vec(const Vec&)>& apply, std::size_t n, std::size_t k,
                      Vec& evals, Mat& evecs, double tol, std::size_t max_iter) {
    if (max_iter == 0) max_iter = std::min(n, std::max<std::size_t>(8 * k + 40, 240));
    max_iter = std::min(max_iter, n);

    // Deterministic pseudo-random start avoids accidental orthogonality to
    // target eigenvectors.
    CounterRng rng(0x5EEDCAFE01ULL, 0);
    std::vector<Vec> basis;
    basis.reserve(max_iter + 1);
    Vec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = rng.uniform() - 0.5;
    {
        const double nv = norm2(v);
        for (double& x : v) x /= nv;
    }
    basis.push_back(v);
    Vec alpha, beta;

    Vec ritz_vals;
    Mat tz;
    std::size_t iters = 0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        Vec w = apply(basis[it]);
        const double a = dot(w, basis[it]);
        alpha.push_back(a);
        // Full reorthogonalization keeps the basis clean at these sizes.
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) {
                const double c = dot(w, b);
                for (std::size_t i = 0; i < n; ++i) w[i] -= c * b[i];
            }
        const double b = norm2(w);
        iters = it + 1;
        const bool last = (it + 1 == max_iter) || b < 1e-14;

        // Periodic Ritz check on the tridiagonal projection.
        if (last || ((it + 1) % 20 == 0 && it + 1 >= std::max<std::size_t>(2 * k, 10))) {
            const std::size_t msz = alpha.size();
            Mat t(msz, msz, 0.0);
            for (std::size_t i = 0; i < msz; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < msz) {
                    t(i, i + 1) = beta[i];
                    t(i + 1, i) = beta[i];
                }
            }
            sym_eig_dense(t, ritz_vals, tz);
            if (msz >= k) {
                // Residual of Ritz pair j is |beta_last * tz(last, j)|.
                const double blast = b;
                double worst = 0.0;
                for (std::size_t j = 0; j < k; ++j) {
                    const double res = std::abs(blast * tz(msz - 1, j));
                    worst = std::max(worst, res / std::max(1.0, std::abs(ritz_vals[j])));
                }
                if (worst < tol || last) {
                    if (worst >= tol && b >= 1e-14)
                        throw NotConverged("lanczos residual " + std::to_string(worst) +
                                           " after " + std::to_string(iters) + " iterations");
                    evals.assign(ritz_vals.begin(), ritz_vals.begin() + k);
                    evecs = Mat(n, k, 0.0);
                    for (std::size_t j = 0; j < k; ++j)
                        for (std::size_t i2 = 0; i2 < msz; ++i2) {
                            const double c = tz(i2, j);
                            const Vec& bb = basis[i2];
                            for (std::size_t r = 0; r < n; ++r) evecs(r, j) += c * bb[r];
                        }
                    return;
                }
            }
            if (last && msz < k)
                throw NotConverged("lanczos basis exhausted before reaching k pairs");
        }
        beta.push_back(b);
        if (b < 1e-14) {
            // Invariant subspace hit; restart direction deterministically.
            Vec fresh(n);
            for (std::size_t i = 0; i < n; ++i) fresh[i] = rng.uniform() - 0.5;
            for (int pass = 0; pass < 2; ++pass)
                for (const Vec& bb : basis) {
                    const double c = dot(fresh, bb);
                    for (std::size_t i = 0; i < n; ++i) fresh[i] -= c * bb[i];
                }
            const double nf = norm2(fresh);
            if (nf < 1e-12) throw NotConverged("no fresh lanczos direction available");
            for (double& x : fresh) x /= nf;
            beta.back() = 0.0;
            basis.push_back(fresh);
        } else {
            for (double& x : w) x /= b;
            basis.push_back(w);
        }
    }
    throw NotConverged("lanczos exceeded " + std::to_string(max_iter) + " iterations");
}

}  // namespace fermat
