#include "fermat/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fermat/errors.hpp"
#include "fermat/rng.hpp"

namespace fermat {

double SpectralDecomposition::mass_inner(const Vec& u, const Vec& v) const {
    double s = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) s += mass[i] * u[i] * v[i];
    return s / static_cast<double>(mass.size());
}

namespace {

// y = B^{-1/2} (D - W) B^{-1/2} x for the conjugated pencil.
Vec conjugated_apply(const SparseWeightedGraph& g, const Vec& binvsqrt, const Vec& x) {
    const std::size_t n = g.size();
    Vec t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = binvsqrt[i] * x[i];
    Vec y = g.multiply(t);
    const Vec& d = g.degrees();
    for (std::size_t i = 0; i < n; ++i) y[i] = binvsqrt[i] * (d[i] * t[i] - y[i]);
    return y;
}

void fix_sign(Mat& vecs, std::size_t col) {
    const std::size_t n = vecs.rows();
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(vecs(i, col));
        if (a > best + 1e-300 && a > best) {
            best = a;
            arg = i;
        }
    }
    if (vecs(arg, col) < 0.0)
        for (std::size_t i = 0; i < n; ++i) vecs(i, col) = -vecs(i, col);
}

}  // namespace

SpectralDecomposition eig_smallest_pencil(const SparseWeightedGraph& g, const Vec& mass,
                                          std::size_t K, const EigOptions& opts) {
    const std::size_t n = g.size();
    if (K > n) throw Error("requested more eigenpairs than the problem size");
    if (opts.require_connected && !g.connected())
        throw Disconnected("eigensolve requires a connected graph");
    for (double b : mass)
        if (!(b > 0.0)) throw ZeroDegree("mass diagonal must be positive");

    Vec binvsqrt(n);
    for (std::size_t i = 0; i < n; ++i) binvsqrt[i] = 1.0 / std::sqrt(mass[i]);

    Vec evals;
    Mat evecs;
    if (n <= opts.dense_cutoff) {
        Mat msym(n, n, 0.0);
        const Vec& d = g.degrees();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e)
                msym(i, g.col(e)) -= g.value(e) * binvsqrt[i] * binvsqrt[g.col(e)];
            msym(i, i) += d[i] * binvsqrt[i] * binvsqrt[i];
        }
        // Exact symmetry for the QL sweep.
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = 0.5 * (msym(i, j) + msym(j, i));
                msym(i, j) = v;
                msym(j, i) = v;
            }
        Vec all_vals;
        Mat all_vecs;
        sym_eig_dense(msym, all_vals, all_vecs);
        evals.assign(all_vals.begin(), all_vals.begin() + K);
        evecs = Mat(n, K);
        for (std::size_t j = 0; j < K; ++j)
            for (std::size_t i = 0; i < n; ++i) evecs(i, j) = all_vecs(i, j);
    } else {
        lanczos_smallest(
            [&](const Vec& x) { return conjugated_apply(g, binvsqrt, x); }, n, K, evals, evecs,
            opts.tol);
    }

    SpectralDecomposition dec;
    dec.mass = mass;
    dec.eigenvalues.resize(K);
    dec.eigenvectors = Mat(n, K);
    dec.residuals.resize(K);
    dec.cluster_id.resize(K);

    const Vec& d = g.degrees();
    for (std::size_t j = 0; j < K; ++j) {
        dec.eigenvalues[j] = opts.scale * evals[j];
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = binvsqrt[i] * evecs(i, j);
        // Mass normalization: (1/n) sum mass_i v_i^2 = 1.
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += mass[i] * v[i] * v[i];
        norm = std::sqrt(norm / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) dec.eigenvectors(i, j) = v[i] / norm;
        fix_sign(dec.eigenvectors, j);

        // Residual  ||(D-W)v - lambda B v|| / ||B v||  in the pencil scale.
        Vec av = g.multiply(v);
        double rnum = 0.0, rden = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double Av = d[i] * v[i] - av[i];
            const double Bv = mass[i] * v[i];
            const double r = Av - evals[j] * Bv;
            rnum += r * r;
            rden += Bv * Bv;
        }
        dec.residuals[j] = std::sqrt(rnum) / std::max(std::sqrt(rden), 1e-300);
    }
    int cluster = 0;
    for (std::size_t j = 0; j < K; ++j) {
        if (j > 0 && std::abs(evals[j] - evals[j - 1]) >= 1e-9) ++cluster;
        dec.cluster_id[j] = cluster;
    }
    return dec;
}

SpectralDecomposition eig_smallest(const SparseWeightedGraph& g, std::size_t K,
                                   const EigOptions& opts) {
    return eig_smallest_pencil(g, g.degrees(), K, opts);
}

SpectralDecomposition eig_smallest(const OperatorMatrix& op, std::size_t K,
                                   const EigOptions& opts) {
    // L = pre . (Dq - Wq): conjugating weight B = pre^{-1}.  A nontrivial
    // right factor (r != 0 in the base family) breaks the similarity.
    if (!op.post.empty()) throw Error("operator with right diagonal factor is not symmetrizable");
    EigOptions local = opts;
    local.scale = opts.scale * op.scale;
    const std::size_t n = op.size();
    Vec mass(n, 1.0);
    if (!op.pre.empty())
        for (std::size_t i = 0; i < n; ++i) {
            if (!(op.pre[i] > 0.0)) throw ZeroDegree("nonpositive diagonal factor");
            mass[i] = 1.0 / op.pre[i];
        }
    return eig_smallest_pencil(op.graph, mass, K, local);
}

SpectralDecomposition eig_smallest(const LaplacianSpec& spec, const SparseWeightedGraph& g,
                                   std::size_t K, const EigOptions& opts) {
    OperatorMatrix op;
    if (spec.mode == LaplacianSpec::Mode::FermatPs)
        op = laplacian_ps(g, spec.s);
    else
        op = laplacian_jqr(g, spec.j, spec.q, spec.r);
    return eig_smallest(op, K, opts);
}

double rayleigh_minmax_check(const SparseWeightedGraph& g, double h, std::size_t m,
                             std::size_t K) {
    const std::size_t n = g.size();
    const double scale = 2.0 * (static_cast<double>(m) + 2.0) / (h * h);

    // Route 1: dense pencil (F, Mass) assembled from the Dirichlet form
    // b(u,u) = (m+2)/(n h^2) sum w_ij (u_i-u_j)^2 and ||u||_m^2.
    Mat f(n, n, 0.0);
    const Vec& d = g.degrees();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e)
            f(i, g.col(e)) -= g.value(e);
        f(i, i) += d[i];
    }
    const double fscale = 2.0 * (static_cast<double>(m) + 2.0) /
                          (static_cast<double>(n) * h * h);
    Vec minv(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(d[i] > 0.0)) throw ZeroDegree("zero degree in minmax check");
        minv[i] = 1.0 / std::sqrt(d[i] / static_cast<double>(n));
    }
    Mat conj(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            conj(i, j) = fscale * f(i, j) * minv[i] * minv[j];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (conj(i, j) + conj(j, i));
            conj(i, j) = v;
            conj(j, i) = v;
        }
    Vec form_vals;
    sym_eig_values(conj, form_vals);

    // Route 2: the production solver.
    EigOptions opts;
    opts.require_connected = false;
    opts.scale = scale;
    const SpectralDecomposition dec = eig_smallest(g, K, opts);

    double worst = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const double a = form_vals[k];
        const double b = dec.eigenvalues[k];
        // Deviations at the problem scale; zero eigenvalues would otherwise
        // divide rounding noise by rounding noise.
        const double den = std::max({std::abs(a), std::abs(b), scale});
        worst = std::max(worst, std::abs(a - b) / den);
    }
    return worst;
}

Vec continuum_spectrum_1d(const DensityModel& model, double p, double s, std::size_t grid_n,
                          std::size_t K) {
    if (grid_n < 64) throw GridTooCoarse("continuum reference grid needs at least 64 nodes");
    const double dx = 1.0 / static_cast<double>(grid_n);
    const double alpha = 2.0 * (p - 1.0);  // m = 1
    const double drift = p * (s - 1.0) + 1.0 + alpha;

    Vec rho(grid_n), rho1(grid_n), weight(grid_n);
    for (std::size_t i = 0; i < grid_n; ++i) {
        const double x = static_cast<double>(i) * dx;
        const LocalDensityJet j = model.jet_arclength(x);
        rho[i] = j.rho0;
        rho1[i] = j.grad[0];
        weight[i] = std::pow(j.rho0, p * (s - 1.0) + 1.0);
    }

    // A = -rho^alpha [ D2 + drift (rho'/rho) D1 ] with periodic central
    // differences, conjugated by sqrt(weight) and symmetrized.
    Mat a(grid_n, grid_n, 0.0);
    for (std::size_t i = 0; i < grid_n; ++i) {
        const std::size_t ip = (i + 1) % grid_n;
        const std::size_t im = (i + grid_n - 1) % grid_n;
        const double pre = std::pow(rho[i], alpha);
        const double c2 = 1.0 / (dx * dx);
        const double c1 = drift * rho1[i] / rho[i] / (2.0 * dx);
        a(i, ip) += -pre * (c2 + c1);
        a(i, im) += -pre * (c2 - c1);
        a(i, i) += -pre * (-2.0 * c2);
    }
    Mat sym(grid_n, grid_n, 0.0);
    for (std::size_t i = 0; i < grid_n; ++i)
        for (std::size_t j = 0; j < grid_n; ++j)
            sym(i, j) = std::sqrt(weight[i]) * a(i, j) / std::sqrt(weight[j]);
    for (std::size_t i = 0; i < grid_n; ++i)
        for (std::size_t j = i + 1; j < grid_n; ++j) {
            const double v = 0.5 * (sym(i, j) + sym(j, i));
            sym(i, j) = v;
            sym(j, i) = v;
        }
    Vec evals;
    sym_eig_values(sym, evals);
    evals.resize(std::min(K, evals.size()));
    return evals;
}

Vec spectral_projection(const SpectralDecomposition& dec, const Interval& J, const Vec& u) {
    const std::size_t n = dec.eigenvectors.rows();
    Vec out(n, 0.0);
    for (std::size_t k = 0; k < dec.size(); ++k) {
        if (!J.contains(dec.eigenvalues[k])) continue;
        Vec vk(n);
        for (std::size_t i = 0; i < n; ++i) vk[i] = dec.eigenvectors(i, k);
        const double c = dec.mass_inner(vk, u);
        for (std::size_t i = 0; i < n; ++i) out[i] += c * vk[i];
    }
    return out;
}

namespace {

double quad_form(const Mat& a, const Vec& u) {
    const std::size_t n = a.rows();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += a(i, j) * u[j];
        s += u[i] * row;
    }
    return s;
}

// Euclidean projection of u onto the span of columns in `cols`.
Vec project_cols(const Mat& vecs, const std::vector<std::size_t>& cols, const Vec& u) {
    Vec out(u.size(), 0.0);
    for (const std::size_t c : cols) {
        double coef = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) coef += vecs(i, c) * u[i];
        for (std::size_t i = 0; i < u.size(); ++i) out[i] += coef * vecs(i, c);
    }
    return out;
}

}  // namespace

DiscrepancyReport eigvec_discrepancy_check(const Mat& a1, const Mat& a2, std::size_t k,
                                           double delta, double alpha, double beta, double gamma,
                                           double a, std::size_t n_audit) {
    const std::size_t n = a1.rows();
    if (!(alpha <= beta && beta <= gamma && gamma <= 1.0))
        throw HypothesisViolated("window constants must satisfy alpha <= beta <= gamma <= 1");

    // Hypothesis audit: |b1(u)-b2(u)| <= delta on random unit vectors.
    DiscrepancyReport rep;
    CounterRng rng(0xA0D17ULL, 0);
    for (std::size_t t = 0; t < n_audit; ++t) {
        Vec u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = rng.normal();
        const double nu = norm2(u);
        for (double& x : u) x /= nu;
        const double gap = std::abs(quad_form(a1, u) - quad_form(a2, u));
        rep.audit_max = std::max(rep.audit_max, gap);
        if (gap > delta)
            throw HypothesisViolated("form discrepancy " + std::to_string(gap) +
                                     " exceeds delta on an audited vector");
    }

    Vec l1, l2;
    Mat v1, v2;
    sym_eig_dense(a1, l1, v1);
    sym_eig_dense(a2, l2, v2);
    const double lk = l1[k];

    // Gap condition: no b2 eigenvalue inside (lk + alpha, lk + beta).
    for (const double l : l2)
        if (l > lk + alpha && l < lk + beta)
            throw HypothesisViolated("b2 eigenvalue " + std::to_string(l) +
                                     " falls in the forbidden window");

    Vec uk(n);
    for (std::size_t i = 0; i < n; ++i) uk[i] = v1(i, k);

    std::vector<std::size_t> window;
    for (std::size_t j = 0; j < n; ++j)
        if (l2[j] > lk - gamma && l2[j] <= lk + alpha) window.push_back(j);
    const Vec pu = project_cols(v2, window, uk);
    double lhs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = uk[i] - pu[i];
        lhs += r * r;
    }
    rep.lhs = lhs;
    rep.rhs = delta * lk / beta + alpha / gamma + delta * lk * (lk + beta) / (gamma * beta);
    rep.holds = rep.lhs <= rep.rhs;

    // Projection-lemma pair with its own window parameter a.
    std::vector<std::size_t> lemma_cols;
    for (std::size_t j = 0; j < n; ++j)
        if (l2[j] <= lk + a) lemma_cols.push_back(j);
    const Vec pl = project_cols(v2, lemma_cols, uk);
    Vec res(n);
    for (std::size_t i = 0; i < n; ++i) res[i] = uk[i] - pl[i];
    rep.lemma_energy = quad_form(a2, res);
    rep.lemma_norm = dot(res, res);
    rep.lemma_energy_bound = delta * lk * (lk + a) / a;
    rep.lemma_norm_bound = delta * lk / a;
    return rep;
}

Vec diffusion_evolve(const OperatorMatrix& l, const Vec& u0, double T, double dt) {
    const std::size_t n = l.size();
    const Vec rs = l.row_sums();
    double rmax = 0.0;
    for (double r : rs) rmax = std::max(rmax, std::abs(r));
    double diag_max = 0.0;
    {
        // Diagonal of L = scale*pre_i*(dq_i - wq_ii)*post_i.
        const Vec& d = l.graph.degrees();
        for (std::size_t i = 0; i < n; ++i) {
            double wii = 0.0;
            for (std::size_t e = l.graph.row_begin(i); e < l.graph.row_end(i); ++e)
                if (l.graph.col(e) == i) wii = l.graph.value(e);
            double v = (d[i] - wii) * l.scale;
            if (!l.pre.empty()) v *= l.pre[i];
            if (!l.post.empty()) v *= l.post[i];
            diag_max = std::max(diag_max, std::abs(v));
        }
    }
    if (rmax > 1e-8 * std::max(1.0, diag_max))
        throw Error("operator rows do not sum to zero; not a rate matrix");
    if (diag_max > 0.0 && dt > 1.0 / diag_max)
        throw UnstableStep("dt exceeds the explicit-Euler stability bound");

    Vec u(u0);
    double t = 0.0;
    while (t < T - 1e-15) {
        const double step = std::min(dt, T - t);
        const Vec lu = l.apply_transpose(u);  // (u Q)^T = -L^T u
        for (std::size_t i = 0; i < n; ++i) u[i] -= step * lu[i];
        t += step;
    }
    return u;
}

}  // namespace fermat
