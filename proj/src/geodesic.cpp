#include "fermat/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "fermat/errors.hpp"

namespace fermat {

namespace {

double alpha_of(double p, std::size_t m) { return 2.0 * (p - 1.0) / static_cast<double>(m); }

// Right-hand side of the first-order system (x, v).
void rhs(const DensityModel& model, double alpha, const Vec& x, const Vec& v, Vec& dx, Vec& dv) {
    const LocalDensityJet jet = model.jet(x);
    const std::size_t dim = x.size();
    double vlog = 0.0, vv = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        vlog += v[d] * jet.grad[d] / jet.rho0;
        vv += v[d] * v[d];
    }
    dx = v;
    dv.assign(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d)
        dv[d] = alpha * vlog * v[d] - 0.5 * alpha * vv * jet.grad[d] / jet.rho0;
}

}  // namespace

GeodesicState geodesic_initial_state(const DensityModel& model, const Vec& y, const Vec& b,
                                     double p) {
    const std::size_t m = model.domain().intrinsic_dim();
    const double rho0 = model.eval(y);
    GeodesicState s;
    s.position = y;
    s.velocity.resize(b.size());
    const double speed = std::pow(rho0, 0.5 * alpha_of(p, m));
    for (std::size_t d = 0; d < b.size(); ++d) s.velocity[d] = speed * b[d];
    return s;
}

GeodesicState geodesic_ode_step(const DensityModel& model, const GeodesicState& state, double p,
                                double dt) {
    const std::size_t m = model.domain().intrinsic_dim();
    const double alpha = alpha_of(p, m);
    const std::size_t dim = state.position.size();

    Vec k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v, xt(dim), vt(dim);
    try {
        rhs(model, alpha, state.position, state.velocity, k1x, k1v);
        for (std::size_t d = 0; d < dim; ++d) {
            xt[d] = state.position[d] + 0.5 * dt * k1x[d];
            vt[d] = state.velocity[d] + 0.5 * dt * k1v[d];
        }
        rhs(model, alpha, xt, vt, k2x, k2v);
        for (std::size_t d = 0; d < dim; ++d) {
            xt[d] = state.position[d] + 0.5 * dt * k2x[d];
            vt[d] = state.velocity[d] + 0.5 * dt * k2v[d];
        }
        rhs(model, alpha, xt, vt, k3x, k3v);
        for (std::size_t d = 0; d < dim; ++d) {
            xt[d] = state.position[d] + dt * k3x[d];
            vt[d] = state.velocity[d] + dt * k3v[d];
        }
        rhs(model, alpha, xt, vt, k4x, k4v);
    } catch (const OutOfDomain&) {
        // An intermediate stage already left the support.
        throw LeftDomain("geodesic step exited the domain at t = " + std::to_string(state.t));
    }

    GeodesicState out;
    out.position.resize(dim);
    out.velocity.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        out.position[d] =
            state.position[d] + dt / 6.0 * (k1x[d] + 2.0 * k2x[d] + 2.0 * k3x[d] + k4x[d]);
        out.velocity[d] =
            state.velocity[d] + dt / 6.0 * (k1v[d] + 2.0 * k2v[d] + 2.0 * k3v[d] + k4v[d]);
    }
    out.t = state.t + dt;
    if (!model.domain().contains(out.position))
        throw LeftDomain("geodesic step exited the domain at t = " + std::to_string(out.t));
    return out;
}

GeodesicState geodesic_integrate(const DensityModel& model, GeodesicState state, double p,
                                 double T, double dt) {
    const std::size_t steps = static_cast<std::size_t>(std::llround(T / dt));
    for (std::size_t s = 0; s < steps; ++s) state = geodesic_ode_step(model, state, p, dt);
    const double rem = T - static_cast<double>(steps) * dt;
    if (std::abs(rem) > 1e-12) state = geodesic_ode_step(model, state, p, rem);
    return state;
}

double gp_speed(const DensityModel& model, const GeodesicState& state, double p) {
    const std::size_t m = model.domain().intrinsic_dim();
    const double rho = model.eval(state.position);
    return std::pow(rho, -0.5 * alpha_of(p, m)) * norm2(state.velocity);
}

Vec geodesic_taylor(const LocalDensityJet& jet, const Vec& b, double t, double p, std::size_t m) {
    const double alpha = alpha_of(p, m);
    const std::size_t dim = b.size();
    const double rho = jet.rho0;
    double gb = 0.0, gg = 0.0, hbb = 0.0;
    Vec hb(dim, 0.0);
    for (std::size_t d = 0; d < dim; ++d) {
        gb += jet.grad[d] * b[d];
        gg += jet.grad[d] * jet.grad[d];
        for (std::size_t e = 0; e < dim; ++e) hb[d] += jet.hess(d, e) * b[e];
    }
    for (std::size_t d = 0; d < dim; ++d) hbb += b[d] * hb[d];

    const double c1p = (alpha * alpha / 3.0 - alpha / 6.0) * std::pow(rho, 1.5 * alpha - 2.0) * gb * gb +
                       alpha / 6.0 * std::pow(rho, 1.5 * alpha - 1.0) * hbb -
                       alpha * alpha / 12.0 * std::pow(rho, 1.5 * alpha - 2.0) * gg;
    const double c2p = -alpha / 12.0 * std::pow(rho, 1.5 * alpha - 1.0);
    const double c3p = (alpha / 12.0 - alpha * alpha / 6.0) * std::pow(rho, 1.5 * alpha - 2.0) * gb;

    Vec out(dim, 0.0);
    const double lin = std::pow(rho, 0.5 * alpha) * t;
    const double quad = alpha * std::pow(rho, alpha - 1.0) * t * t;
    const double cub = t * t * t;
    for (std::size_t d = 0; d < dim; ++d) {
        out[d] = lin * b[d] + quad * (0.5 * gb * b[d] - 0.25 * jet.grad[d]) +
                 cub * (c1p * b[d] + c2p * hb[d] + c3p * jet.grad[d]);
    }
    return out;
}

FermatBall fermat_ball(const DensityModel& model, const Vec& center, double T,
                       std::size_t n_dirs, double p, double dt) {
    FermatBall ball;
    ball.boundary.reserve(n_dirs + 1);
    ball.escaped.assign(n_dirs, false);
    for (std::size_t i = 0; i < n_dirs; ++i) {
        const double theta = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n_dirs);
        const Vec b{std::cos(theta), std::sin(theta)};
        GeodesicState s = geodesic_initial_state(model, center, b, p);
        try {
            s = geodesic_integrate(model, s, p, T, dt);
            ball.boundary.push_back(s.position);
        } catch (const LeftDomain&) {
            ball.escaped[i] = true;
            ball.boundary.push_back(s.position);
        }
    }
    if (!ball.boundary.empty()) ball.boundary.push_back(ball.boundary.front());
    return ball;
}

double continuum_fermat_grid(const DensityModel& model, const Vec& x, const Vec& y, double p,
                             std::size_t grid_res) {
    if (grid_res < 32) throw GridTooCoarse("grid needs at least 32 nodes per axis");
    const Domain& dom = model.domain();
    const std::size_t m = dom.intrinsic_dim();
    if (m != 2 && m != 3) throw Error("grid oracle restricted to m in {2, 3}");
    if (dom.kind != DomainKind::Box) throw Error("grid oracle requires a box domain");
    if (!dom.contains(x) || !dom.contains(y)) throw OutOfDomain("endpoint outside the domain");

    const double exponent = (1.0 - p) / static_cast<double>(m);
    std::vector<std::size_t> dims(m, grid_res);
    std::size_t total = 1;
    for (std::size_t d = 0; d < m; ++d) total *= dims[d];
    Vec step(m);
    for (std::size_t d = 0; d < m; ++d)
        step[d] = (dom.hi[d] - dom.lo[d]) / static_cast<double>(grid_res - 1);

    const auto node_point = [&](std::size_t idx) {
        Vec pt(m);
        for (std::size_t d = m; d-- > 0;) {
            pt[d] = dom.lo[d] + static_cast<double>(idx % dims[d]) * step[d];
            idx /= dims[d];
        }
        return pt;
    };
    const auto nearest_node = [&](const Vec& pt) {
        std::size_t idx = 0;
        for (std::size_t d = 0; d < m; ++d) {
            const std::size_t c = static_cast<std::size_t>(
                std::llround((pt[d] - dom.lo[d]) / step[d]));
            idx = idx * dims[d] + std::min(c, dims[d] - 1);
        }
        return idx;
    };

    const std::size_t src = nearest_node(x);
    const std::size_t dst = nearest_node(y);
    constexpr double kInf = std::numeric_limits<double>::infinity();
    Vec dist(total, kInf);
    std::vector<char> done(total, 0);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    dist[src] = 0.0;
    heap.emplace(0.0, src);

    // Offsets of the full Moore neighborhood.
    std::vector<std::vector<int>> offsets;
    {
        std::vector<int> off(m, -1);
        for (;;) {
            bool all_zero = true;
            for (int v : off) all_zero &= (v == 0);
            if (!all_zero) offsets.push_back(off);
            std::size_t d = 0;
            for (; d < m; ++d) {
                if (off[d] < 1) { ++off[d]; break; }
                off[d] = -1;
            }
            if (d == m) break;
        }
    }

    std::vector<std::size_t> coord(m);
    while (!heap.empty()) {
        const auto [dcur, i] = heap.top();
        heap.pop();
        if (done[i]) continue;
        done[i] = 1;
        if (i == dst) break;
        std::size_t rem = i;
        for (std::size_t d = m; d-- > 0;) {
            coord[d] = rem % dims[d];
            rem /= dims[d];
        }
        const Vec pi = node_point(i);
        for (const auto& off : offsets) {
            std::size_t j = 0;
            bool ok = true;
            double len2 = 0.0;
            for (std::size_t d = 0; d < m; ++d) {
                const long c = static_cast<long>(coord[d]) + off[d];
                if (c < 0 || c >= static_cast<long>(dims[d])) { ok = false; break; }
                j = j * dims[d] + static_cast<std::size_t>(c);
                len2 += step[d] * step[d] * off[d] * off[d];
            }
            if (!ok || done[j]) continue;
            const Vec pj = node_point(j);
            Vec mid(m);
            for (std::size_t d = 0; d < m; ++d) mid[d] = 0.5 * (pi[d] + pj[d]);
            const double cost = std::sqrt(len2) * std::pow(model.eval(mid), exponent);
            const double nd = dcur + cost;
            if (nd < dist[j]) {
                dist[j] = nd;
                heap.emplace(nd, j);
            }
        }
    }
    return dist[dst];
}

double ExpansionPair::euclid_from_L(double L) const { return c1 * L + c2 * L * L + c3 * L * L * L; }

double ExpansionPair::L_from_euclid(double eps) const { return d1 * eps + d2 * eps * eps; }

ExpansionPair euclid_fermat_expansions(const LocalDensityJet& jet, const Vec& x, const Vec& y,
                                       double p, std::size_t m) {
    const std::size_t dim = x.size();
    Vec u(dim);
    double nn = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        u[d] = y[d] - x[d];
        nn += u[d] * u[d];
    }
    nn = std::sqrt(nn);
    if (!(nn > 0.0)) throw Error("expansion requires distinct endpoints");
    for (double& v : u) v /= nn;

    const double alpha = alpha_of(p, m);
    const double pm = (p - 1.0) / static_cast<double>(m);
    const double rho = jet.rho0;
    double gu = 0.0, gg = 0.0, huu = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
        gu += jet.grad[d] * u[d];
        gg += jet.grad[d] * jet.grad[d];
        for (std::size_t e = 0; e < dim; ++e) huu += u[d] * jet.hess(d, e) * u[e];
    }

    ExpansionPair pair;
    pair.c1 = std::pow(rho, pm);
    pair.c2 = 0.5 * pm * gu * std::pow(rho, 2.0 * pm - 1.0);
    pair.c3 = std::pow(rho, 1.5 * alpha - 2.0) *
              (alpha * alpha / 96.0 * gg + (7.0 * alpha * alpha / 96.0 - alpha / 12.0) * gu * gu +
               alpha / 12.0 * rho * huu);
    pair.d1 = std::pow(rho, -pm);
    pair.d2 = -0.5 * pm * (gu / rho) * std::pow(rho, -pm);
    return pair;
}

double sectional_curvature_bound(double K, double beta, double L1, double L2, double p,
                                 std::size_t m) {
    const double md = static_cast<double>(m);
    const double alpha = 2.0 * (p - 1.0) / md;
    return std::pow(beta, alpha) *
           (K + 3.0 * beta * beta * (p - 1.0) * (p - 1.0) * L1 * L1 / (md * md) +
            2.0 * beta * beta * (p - 1.0) * L1 * L1 / md + beta * (p - 1.0) * L2 / md);
}

}  // namespace fermat
