#include "fermat/density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "fermat/errors.hpp"

namespace fermat {

namespace {
constexpr std::size_t kQuadNodes = 512;
constexpr double kFdStep = 1e-5;
}  // namespace

std::size_t Domain::ambient_dim() const {
    switch (kind) {
        case DomainKind::Box: return lo.size();
        default: return 2;
    }
}

std::size_t Domain::intrinsic_dim() const {
    switch (kind) {
        case DomainKind::Box: return lo.size();
        case DomainKind::Disk: return 2;
        case DomainKind::Circle: return 1;
    }
    return 0;
}

bool Domain::contains(const Vec& x, double tol) const {
    switch (kind) {
        case DomainKind::Box: {
            if (x.size() != lo.size()) return false;
            for (std::size_t d = 0; d < lo.size(); ++d)
                if (x[d] < lo[d] - tol || x[d] > hi[d] + tol) return false;
            return true;
        }
        case DomainKind::Disk:
            return x.size() == 2 && x[0] * x[0] + x[1] * x[1] <= 1.0 + tol;
        case DomainKind::Circle: {
            if (x.size() != 2) return false;
            const double r = 1.0 / (2.0 * M_PI);
            return std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1]) - r) <= tol;
        }
    }
    return false;
}

double Domain::measure() const {
    switch (kind) {
        case DomainKind::Box: {
            double v = 1.0;
            for (std::size_t d = 0; d < lo.size(); ++d) v *= hi[d] - lo[d];
            return v;
        }
        case DomainKind::Disk: return M_PI;
        case DomainKind::Circle: return 1.0;
    }
    return 0.0;
}

double unit_ball_volume(std::size_t m) {
    return std::pow(M_PI, 0.5 * static_cast<double>(m)) /
           std::tgamma(0.5 * static_cast<double>(m) + 1.0);
}

void gauss_legendre(std::size_t n, Vec& nodes, Vec& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Chebyshev initial guess, Newton refinement on P_n.
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

DensityModel DensityModel::uniform(Domain domain) {
    DensityModel m;
    m.kind_ = DensityKind::Uniform;
    m.domain_ = std::move(domain);
    m.finalize();
    return m;
}

DensityModel DensityModel::linear(Domain box, double slope) {
    DensityModel m;
    m.kind_ = DensityKind::Linear;
    m.domain_ = std::move(box);
    m.params_ = {slope};
    m.finalize();
    return m;
}

DensityModel DensityModel::disk_valley(double tau) {
    DensityModel m;
    m.kind_ = DensityKind::DiskValley;
    m.domain_.kind = DomainKind::Disk;
    m.params_ = {tau};
    m.finalize();
    return m;
}

DensityModel DensityModel::gaussian_mixture_bg(Domain box, Vec mean1, Vec mean2, double sigma,
                                               double tau) {
    DensityModel m;
    m.kind_ = DensityKind::GaussianMixtureBg;
    m.domain_ = std::move(box);
    m.params_ = {mean1[0], mean1[1], mean2[0], mean2[1], sigma, tau};
    m.finalize();
    return m;
}

DensityModel DensityModel::custom_grid(Domain box, std::size_t nx, std::size_t ny, Vec values) {
    DensityModel m;
    m.kind_ = DensityKind::CustomGrid;
    m.domain_ = std::move(box);
    m.grid_nx_ = nx;
    m.grid_ny_ = ny;
    m.grid_values_ = std::move(values);
    m.analytic_jet_ = false;
    m.finalize();
    return m;
}

DensityModel DensityModel::sine_circle(double amplitude) {
    DensityModel m;
    m.kind_ = DensityKind::SineCircle;
    m.domain_.kind = DomainKind::Circle;
    m.params_ = {amplitude};
    m.finalize();
    return m;
}

double DensityModel::raw_arclength(double x) const {
    x -= std::floor(x);
    switch (kind_) {
        case DensityKind::Uniform: return 1.0;
        case DensityKind::SineCircle: return 1.0 + params_[0] * std::sin(2.0 * M_PI * x);
        default: throw Error("density kind not defined on the circle");
    }
}

double DensityModel::raw(const Vec& x) const {
    switch (kind_) {
        case DensityKind::Uniform: return 1.0;
        case DensityKind::Linear: return 1.0 + params_[0] * x[0];
        case DensityKind::DiskValley: return 1.0 / (params_[0] + x[0] * x[0]);
        case DensityKind::GaussianMixtureBg: {
            const double s2 = params_[4] * params_[4];
            const double g1 = sq_dist(x.data(), &params_[0], 2);
            const double g2 = sq_dist(x.data(), &params_[2], 2);
            const double gauss = (std::exp(-0.5 * g1 / s2) + std::exp(-0.5 * g2 / s2)) /
                                 (2.0 * M_PI * s2);
            return gauss + params_[5];
        }
        case DensityKind::CustomGrid: {
            // Bilinear interpolation on the node lattice.
            const double fx = (x[0] - domain_.lo[0]) / (domain_.hi[0] - domain_.lo[0]) *
                              (grid_nx_ - 1);
            const double fy = (x[1] - domain_.lo[1]) / (domain_.hi[1] - domain_.lo[1]) *
                              (grid_ny_ - 1);
            const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(std::max(fx, 0.0)),
                                                        grid_nx_ - 2);
            const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(std::max(fy, 0.0)),
                                                        grid_ny_ - 2);
            const double a = fx - i, b = fy - j;
            const auto v = [&](std::size_t ii, std::size_t jj) {
                return grid_values_[ii * grid_ny_ + jj];
            };
            return (1 - a) * (1 - b) * v(i, j) + a * (1 - b) * v(i + 1, j) +
                   (1 - a) * b * v(i, j + 1) + a * b * v(i + 1, j + 1);
        }
        case DensityKind::SineCircle: {
            const double theta = std::atan2(x[1], x[0]);
            double t = theta / (2.0 * M_PI);
            return raw_arclength(t);
        }
    }
    return 1.0;
}

void DensityModel::finalize() {
    double integral = 0.0;
    rho_max_ = 0.0;
    rho_min_ = std::numeric_limits<double>::infinity();
    const auto record = [&](double v) {
        rho_max_ = std::max(rho_max_, v);
        rho_min_ = std::min(rho_min_, v);
    };

    Vec gl_x, gl_w;
    switch (domain_.kind) {
        case DomainKind::Box: {
            gauss_legendre(kQuadNodes, gl_x, gl_w);
            const std::size_t dim = domain_.lo.size();
            if (dim == 1) {
                const double c = 0.5 * (domain_.hi[0] - domain_.lo[0]);
                for (std::size_t i = 0; i < kQuadNodes; ++i) {
                    Vec x{domain_.lo[0] + c * (gl_x[i] + 1.0)};
                    const double v = raw(x);
                    record(v);
                    integral += c * gl_w[i] * v;
                }
            } else if (dim == 2) {
                const double cx = 0.5 * (domain_.hi[0] - domain_.lo[0]);
                const double cy = 0.5 * (domain_.hi[1] - domain_.lo[1]);
                for (std::size_t i = 0; i < kQuadNodes; ++i) {
                    const double xi = domain_.lo[0] + cx * (gl_x[i] + 1.0);
                    double row = 0.0;
                    for (std::size_t j = 0; j < kQuadNodes; ++j) {
                        Vec x{xi, domain_.lo[1] + cy * (gl_x[j] + 1.0)};
                        const double v = raw(x);
                        record(v);
                        row += gl_w[j] * v;
                    }
                    integral += cx * cy * gl_w[i] * row;
                }
            } else {
                throw Error("box quadrature implemented for dim <= 2");
            }
            break;
        }
        case DomainKind::Disk: {
            // Polar tensor rule: Gauss-Legendre radially, trapezoid in angle.
            gauss_legendre(kQuadNodes, gl_x, gl_w);
            const std::size_t ntheta = kQuadNodes;
            for (std::size_t i = 0; i < kQuadNodes; ++i) {
                const double r = 0.5 * (gl_x[i] + 1.0);
                double row = 0.0;
                for (std::size_t j = 0; j < ntheta; ++j) {
                    const double th = 2.0 * M_PI * static_cast<double>(j) / ntheta;
                    Vec x{r * std::cos(th), r * std::sin(th)};
                    const double v = raw(x);
                    record(v);
                    row += v;
                }
                integral += 0.5 * gl_w[i] * r * (2.0 * M_PI / ntheta) * row;
            }
            break;
        }
        case DomainKind::Circle: {
            for (std::size_t j = 0; j < kQuadNodes; ++j) {
                const double t = static_cast<double>(j) / kQuadNodes;
                const double v = raw_arclength(t);
                record(v);
                integral += v / kQuadNodes;
            }
            break;
        }
    }

    if (!(integral > 0.0) || !std::isfinite(integral))
        throw NonfiniteDensity("density does not integrate to a positive finite value");
    if (!(rho_min_ > 0.0))
        throw NonfiniteDensity("density not strictly positive on the domain");
    normalizer_ = 1.0 / integral;
    rho_max_ *= normalizer_;
    rho_min_ *= normalizer_;
    beta_ = std::max(rho_max_, 1.0 / rho_min_);
}

double DensityModel::eval(const Vec& x) const {
    if (!domain_.contains(x)) throw OutOfDomain("point outside the model support");
    const double v = normalizer_ * raw(x);
    if (!(v > 0.0) || !std::isfinite(v)) throw NonfiniteDensity("density evaluation failed");
    return v;
}

double DensityModel::eval_arclength(double x) const {
    if (domain_.kind != DomainKind::Circle) throw Error("eval_arclength requires a circle domain");
    return normalizer_ * raw_arclength(x);
}

LocalDensityJet DensityModel::jet(const Vec& x) const {
    if (domain_.kind == DomainKind::Circle) {
        const double t = std::atan2(x[1], x[0]) / (2.0 * M_PI);
        return jet_arclength(t);
    }
    if (!domain_.contains(x)) throw OutOfDomain("jet requested outside the model support");
    const std::size_t dim = x.size();
    LocalDensityJet j;
    j.rho0 = eval(x);
    j.grad.assign(dim, 0.0);
    j.hess = Mat(dim, dim, 0.0);

    if (analytic_jet_) {
        switch (kind_) {
            case DensityKind::Uniform: break;
            case DensityKind::Linear: j.grad[0] = normalizer_ * params_[0]; break;
            case DensityKind::DiskValley: {
                const double den = params_[0] + x[0] * x[0];
                const double g = 1.0 / den;
                j.grad[0] = normalizer_ * (-2.0 * x[0] * g * g);
                j.hess(0, 0) = normalizer_ * (8.0 * x[0] * x[0] * g * g * g - 2.0 * g * g);
                break;
            }
            case DensityKind::GaussianMixtureBg: {
                const double s2 = params_[4] * params_[4];
                const double c = normalizer_ / (2.0 * M_PI * s2);
                for (int comp = 0; comp < 2; ++comp) {
                    const double* mu = &params_[2 * comp];
                    const double e = std::exp(-0.5 * sq_dist(x.data(), mu, 2) / s2);
                    for (std::size_t a = 0; a < 2; ++a) {
                        const double da = (x[a] - mu[a]) / s2;
                        j.grad[a] += -c * e * da;
                        for (std::size_t b = 0; b < 2; ++b) {
                            const double db = (x[b] - mu[b]) / s2;
                            j.hess(a, b) += c * e * (da * db - (a == b ? 1.0 / s2 : 0.0));
                        }
                    }
                }
                break;
            }
            default: break;
        }
        return j;
    }

    // Finite-difference fallback (CustomGrid).
    const auto f = [&](const Vec& p) { return normalizer_ * raw(p); };
    for (std::size_t a = 0; a < dim; ++a) {
        Vec xp = x, xm = x;
        xp[a] += kFdStep;
        xm[a] -= kFdStep;
        j.grad[a] = (f(xp) - f(xm)) / (2.0 * kFdStep);
        j.hess(a, a) = (f(xp) - 2.0 * j.rho0 + f(xm)) / (kFdStep * kFdStep);
        for (std::size_t b = a + 1; b < dim; ++b) {
            Vec xpp = x, xpm = x, xmp = x, xmm = x;
            xpp[a] += kFdStep; xpp[b] += kFdStep;
            xpm[a] += kFdStep; xpm[b] -= kFdStep;
            xmp[a] -= kFdStep; xmp[b] += kFdStep;
            xmm[a] -= kFdStep; xmm[b] -= kFdStep;
            const double v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * kFdStep * kFdStep);
            j.hess(a, b) = v;
            j.hess(b, a) = v;
        }
    }
    return j;
}

LocalDensityJet DensityModel::jet_arclength(double x) const {
    if (domain_.kind != DomainKind::Circle) throw Error("jet_arclength requires a circle domain");
    LocalDensityJet j;
    j.rho0 = eval_arclength(x);
    j.grad.assign(1, 0.0);
    j.hess = Mat(1, 1, 0.0);
    if (kind_ == DensityKind::SineCircle) {
        const double w = 2.0 * M_PI;
        j.grad[0] = normalizer_ * params_[0] * w * std::cos(w * x);
        j.hess(0, 0) = -normalizer_ * params_[0] * w * w * std::sin(w * x);
    }
    return j;
}

std::string DensityModel::tag() const {
    switch (kind_) {
        case DensityKind::Uniform: return "uniform";
        case DensityKind::Linear: return "linear";
        case DensityKind::DiskValley: return "disk_valley";
        case DensityKind::GaussianMixtureBg: return "gaussian_mixture_bg";
        case DensityKind::CustomGrid: return "custom_grid";
        case DensityKind::SineCircle: return "sine_circle";
    }
    return "unknown";
}

std::string DensityModel::config_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "kind = " << tag() << "\n";
    switch (domain_.kind) {
        case DomainKind::Box: {
            os << "domain = box\n";
            for (std::size_t d = 0; d < domain_.lo.size(); ++d) {
                os << "lo" << d + 1 << " = " << domain_.lo[d] << "\n";
                os << "hi" << d + 1 << " = " << domain_.hi[d] << "\n";
            }
            break;
        }
        case DomainKind::Disk: os << "domain = disk\n"; break;
        case DomainKind::Circle: os << "domain = circle\n"; break;
    }
    static const char* names[] = {"p1", "p2", "p3", "p4", "p5", "p6"};
    for (std::size_t i = 0; i < params_.size(); ++i)
        os << names[i] << " = " << params_[i] << "\n";
    return os.str();
}

DensityModel DensityModel::from_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    auto need = [&](const std::string& k) {
        auto it = kv.find(k);
        if (it == kv.end()) throw ConfigError("missing density key: " + k);
        return it->second;
    };
    auto num = [&](const std::string& k) { return std::stod(need(k)); };
    const std::string kind = need("kind");
    const std::string dom = need("domain");
    Domain d;
    if (dom == "box") {
        d.kind = DomainKind::Box;
        for (int i = 1; kv.count("lo" + std::to_string(i)); ++i) {
            d.lo.push_back(num("lo" + std::to_string(i)));
            d.hi.push_back(num("hi" + std::to_string(i)));
        }
    } else if (dom == "disk") {
        d.kind = DomainKind::Disk;
    } else if (dom == "circle") {
        d.kind = DomainKind::Circle;
    } else {
        throw ConfigError("unknown domain: " + dom);
    }
    if (kind == "uniform") return DensityModel::uniform(d);
    if (kind == "linear") return DensityModel::linear(d, num("p1"));
    if (kind == "disk_valley") return DensityModel::disk_valley(num("p1"));
    if (kind == "gaussian_mixture_bg")
        return DensityModel::gaussian_mixture_bg(d, {num("p1"), num("p2")},
                                                 {num("p3"), num("p4")}, num("p5"), num("p6"));
    if (kind == "sine_circle") return DensityModel::sine_circle(num("p1"));
    throw ConfigError("unknown density kind: " + kind);
}

}  // namespace fermat
