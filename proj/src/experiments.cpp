#include "fermat/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "fermat/errors.hpp"
#include "fermat/geodesic.hpp"

namespace fermat {

namespace {

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

void write_sidecar(const Config& cfg, const std::string& out_dir, const std::string& name) {
    write_text_file(out_dir + "/" + name + ".config", cfg.text());
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::size_t> parse_sweep(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ':'))
        if (!tok.empty()) out.push_back(std::stoull(tok));
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ':'))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::string sweep_text(const std::vector<std::size_t>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ":" : "") << v[i];
    return os.str();
}

}  // namespace

DensityModel make_two_partitions_model(double ratio, double strip_width) {
    // Fine lattice so the bilinear strip edge is sharp at sampling scale.
    const std::size_t nx = 201, ny = 201;
    Vec values(nx * ny, 1.0);
    for (std::size_t i = 0; i < nx; ++i) {
        const double x = static_cast<double>(i) / (nx - 1);
        if (std::abs(x - 0.5) < 0.5 * strip_width)
            for (std::size_t j = 0; j < ny; ++j) values[i * ny + j] = ratio;
    }
    Domain box;
    box.kind = DomainKind::Box;
    box.lo = {0.0, 0.0};
    box.hi = {1.0, 4.0};
    return DensityModel::custom_grid(box, nx, ny, std::move(values));
}

std::vector<int> geometric_reference(const PointCloud& cloud) {
    std::vector<int> ref(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) ref[i] = cloud.points(i, 1) < 2.0 ? 0 : 1;
    return ref;
}

std::vector<int> density_reference(const PointCloud& cloud) {
    std::vector<int> ref(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) ref[i] = cloud.points(i, 0) < 0.5 ? 0 : 1;
    return ref;
}

double distance_quantile(const Mat& distances, double q) {
    const std::size_t n = distances.rows();
    Vec off;
    off.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) off.push_back(distances(i, j));
    std::sort(off.begin(), off.end());
    const std::size_t idx = std::min(off.size() - 1,
                                     static_cast<std::size_t>(q * static_cast<double>(off.size())));
    return off[idx];
}

TwoPartitionsResult run_two_partitions(Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::size_t n = cfg.get_size("n", 3000);
    const std::uint64_t seed = cfg.get_u64("seed", 0);
    const double ratio = cfg.get_double("strip_ratio", 0.2);
    const double width = cfg.get_double("strip_width", 0.3);
    const double s = cfg.get_double("s", 2.0);
    const double quantile = cfg.get_double("bandwidth_quantile", 0.05);
    const std::size_t r = cfg.get_size("r", 2);
    const std::size_t k = cfg.get_size("k", 2);
    const std::size_t exact_cap = cfg.get_size("exact_cap", 2000);
    std::vector<double> p_grid = parse_grid(cfg.get_str("p_grid", "1:1.5:2:2.5:3:4"));

    cfg.ensure_all_consumed();
    cfg.set("n", std::to_string(n));
    cfg.set("seed", std::to_string(seed));
    cfg.set("strip_ratio", fmt_double(ratio));
    cfg.set("strip_width", fmt_double(width));
    cfg.set("s", fmt_double(s));
    cfg.set("bandwidth_quantile", fmt_double(quantile));
    cfg.set("r", std::to_string(r));
    cfg.set("k", std::to_string(k));
    cfg.set("exact_cap", std::to_string(exact_cap));

    const DensityModel model = make_two_partitions_model(ratio, width);
    const PointCloud cloud = sample_iid(model, n, seed);
    const std::vector<int> ref_geo = geometric_reference(cloud);
    const std::vector<int> ref_den = density_reference(cloud);

    TwoPartitionsResult res;
    res.p_grid = p_grid;
    std::vector<Vec> rows;
    for (const double p : p_grid) {
        FermatParams params;
        params.p = p;
        params.m = 2;
        params.mode = n <= exact_cap ? FermatParams::Mode::Exact : FermatParams::Mode::Knn;
        const DistanceMatrix raw = fermat_pairwise(cloud, params);
        const DistanceMatrix norm = normalize_fermat(raw, n, params);
        const double h = distance_quantile(norm.values, quantile);

        const SparseWeightedGraph w = build_weights(norm.values, h, 2);
        const OperatorMatrix lap = laplacian_ps(w, s);
        const SpectralDecomposition dec = eig_smallest(lap, r);
        Mat emb(n, r);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t c = 0; c < r; ++c) emb(i, c) = dec.eigenvectors(i, c);
        const std::vector<int> labels = kmeans(emb, k, seed).labels;

        const double ag = accuracy(labels, ref_geo);
        const double ad = accuracy(labels, ref_den);
        res.acc_geometric.push_back(ag);
        res.acc_density.push_back(ad);
        rows.push_back({p, ag, ad});

        // Scatter of the labeled cloud at this p.
        Svg svg(360, 960, -0.1, 1.1, -0.2, 4.2);
        for (std::size_t i = 0; i < n; ++i)
            svg.circle(cloud.points(i, 0), cloud.points(i, 1), 1.4,
                       labels[i] == 0 ? "#1f77b4" : "#d62728");
        std::ostringstream name;
        name << out_dir << "/two_partitions_p" << fmt_double(p) << ".svg";
        write_text_file(name.str(), svg.str());
    }
    write_csv(out_dir + "/two_partitions.csv",
              {"p", "accuracy_vs_geometric", "accuracy_vs_density"}, rows);
    cfg.set("p_grid", [&] {
        std::ostringstream os;
        for (std::size_t i = 0; i < p_grid.size(); ++i) os << (i ? ":" : "") << fmt_double(p_grid[i]);
        return os.str();
    }());
    write_sidecar(cfg, out_dir, "two_partitions");
    return res;
}

EigConvergenceResult run_eig_convergence(Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const std::string model_name = cfg.get_str("model", "disk_valley");
    const double tau = cfg.get_double("tau", 0.25);
    const double p = cfg.get_double("p", 1.2);
    const double s = cfg.get_double("s", 2.0);
    const std::size_t K = cfg.get_size("K", 10);
    const double eps = cfg.get_double("eps", 0.05);
    const double bandwidth_scale = cfg.get_double("bandwidth_scale", 0.4);
    const std::uint64_t seed = cfg.get_u64("seed", 0);
    const std::size_t exact_cap = cfg.get_size("exact_cap", 2000);
    const std::size_t mu_replicates = cfg.get_size("mu_replicates", 64);
    const double mu_intensity = cfg.get_double("mu_intensity", 500.0);
    std::vector<std::size_t> sweep = parse_sweep(cfg.get_str("n_sweep", "500:1000:2000:4000"));

    cfg.ensure_all_consumed();
    cfg.set("model", model_name);
    cfg.set("tau", fmt_double(tau));
    cfg.set("p", fmt_double(p));
    cfg.set("s", fmt_double(s));
    cfg.set("K", std::to_string(K));
    cfg.set("eps", fmt_double(eps));
    cfg.set("bandwidth_scale", fmt_double(bandwidth_scale));
    cfg.set("seed", std::to_string(seed));
    cfg.set("exact_cap", std::to_string(exact_cap));
    cfg.set("mu_replicates", std::to_string(mu_replicates));
    cfg.set("mu_intensity", fmt_double(mu_intensity));
    cfg.set("n_sweep", sweep_text(sweep));

    DensityModel model = [&] {
        if (model_name == "disk_valley") return DensityModel::disk_valley(tau);
        if (model_name == "gaussian_mixture_bg") {
            Domain box;
            box.kind = DomainKind::Box;
            box.lo = {-1.0, -1.0};
            box.hi = {1.0, 1.0};
            return DensityModel::gaussian_mixture_bg(box, {-0.5, 0.0}, {0.5, 0.0}, 0.2, tau);
        }
        throw ConfigError("model must be disk_valley or gaussian_mixture_bg");
    }();

    // Keep the rule's eps constraint satisfied for every p.
    const double eps_used = std::min(eps, 0.9 / (8.0 * p + 6.0));
    cfg.set("eps_used", fmt_double(eps_used));

    EigConvergenceResult res;
    res.n_values = sweep;
    res.mu_hat = 1.0;
    if (p != 1.0)
        res.mu_hat = estimate_mu(p, 2, 1.0, mu_intensity, mu_replicates, seed ^ 0x9e37).mean;
    const double mu2 = res.mu_hat * res.mu_hat;

    // Remark-style parameter mapping for the degree-normalized comparison.
    const double alpha = 2.0 * (p - 1.0) / 2.0;
    const double j_map = (s - 1.0) * p + 1.0;
    const double q_map = j_map + alpha;

    for (const std::size_t n : sweep) {
        const PointCloud cloud = sample_iid(model, n, seed + n);
        const double h = bandwidth_scale *
                         bandwidth_rule(n, 2, eps_used, p, model.beta(), res.mu_hat);

        // (i) Fermat L_{p,s}.
        const auto t0 = std::chrono::steady_clock::now();
        FermatParams params;
        params.p = p;
        params.m = 2;
        params.mode = n <= exact_cap ? FermatParams::Mode::Exact : FermatParams::Mode::Knn;
        const DistanceMatrix norm = normalize_fermat(fermat_pairwise(cloud, params), n, params);
        const SparseWeightedGraph wf = build_weights(norm.values, h, 2);
        const SpectralDecomposition dec_f = eig_smallest(laplacian_ps(wf, s), K);
        res.seconds_fermat.push_back(elapsed_s(t0));

        // (ii) Euclidean with the mapped (j, q, r = 0) reweighting.
        const auto t1 = std::chrono::steady_clock::now();
        const Mat euclid = euclidean_pairwise(cloud);
        const SparseWeightedGraph we = build_weights(euclid, h, 2);
        const SpectralDecomposition dec_dn = eig_smallest(laplacian_dn(we, q_map, j_map), K);
        res.seconds_dn.push_back(elapsed_s(t1));

        // (iii) plain Euclidean random walk.
        const auto t2 = std::chrono::steady_clock::now();
        const SpectralDecomposition dec_plain = eig_smallest(laplacian_dn(we, 2.0, 2.0), K);
        res.seconds_plain.push_back(elapsed_s(t2));

        std::vector<double> gaps;
        for (std::size_t k = 0; k < K; ++k) {
            const double lf = mu2 * dec_f.eigenvalues[k];
            const double ldn = dec_dn.eigenvalues[k];
            res.rows.push_back({static_cast<double>(n), static_cast<double>(k + 1), lf, ldn,
                                dec_plain.eigenvalues[k]});
            if (k >= 1) gaps.push_back(std::abs(lf - ldn) / std::max(std::abs(ldn), 1e-300));
        }
        res.median_gap_by_n.push_back(median_of(gaps));
    }

    write_csv(out_dir + "/eig_convergence.csv",
              {"n", "k", "lambda_fermat", "lambda_dn_euclid", "lambda_plain_euclid"}, res.rows);
    {
        std::vector<Vec> trows;
        for (std::size_t i = 0; i < sweep.size(); ++i)
            trows.push_back({static_cast<double>(sweep[i]), res.seconds_fermat[i],
                             res.seconds_dn[i], res.seconds_plain[i]});
        write_csv(out_dir + "/eig_convergence_timings.csv",
                  {"n", "seconds_fermat", "seconds_dn_euclid", "seconds_plain_euclid"}, trows);
    }
    {
        std::vector<Vec> grows;
        for (std::size_t i = 0; i < sweep.size(); ++i)
            grows.push_back({static_cast<double>(sweep[i]), res.median_gap_by_n[i]});
        write_csv(out_dir + "/eig_convergence_gap.csv", {"n", "median_rel_gap"}, grows);

        double lo = 1e300, hi = -1e300;
        for (const auto& row : grows) {
            lo = std::min(lo, row[1]);
            hi = std::max(hi, row[1]);
        }
        Svg svg(480, 320, 0.0, static_cast<double>(sweep.back()) * 1.05, 0.0,
                std::max(hi * 1.2, 1e-12));
        svg.axes();
        std::vector<std::pair<double, double>> pts;
        for (const auto& row : grows) pts.emplace_back(row[0], row[1]);
        svg.polyline(pts, "#1f77b4", 1.5);
        write_text_file(out_dir + "/eig_convergence_gap.svg", svg.str());
    }
    cfg.set("mu_hat", fmt_double(res.mu_hat));
    write_sidecar(cfg, out_dir, "eig_convergence");
    return res;
}

CircleConvergenceResult run_circle_convergence(Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const double amplitude = cfg.get_double("amplitude", 0.0);
    const double p = cfg.get_double("p", 1.0);
    const double s = cfg.get_double("s", 2.0);
    const std::size_t K = cfg.get_size("K", 5);
    const std::size_t grid_n = cfg.get_size("reference_grid", 1024);
    const double eps = cfg.get_double("eps", 0.05);
    const double bandwidth_scale = cfg.get_double("bandwidth_scale", 0.35);
    const std::size_t seeds = cfg.get_size("seeds", 10);
    const std::uint64_t seed0 = cfg.get_u64("seed", 0);
    const std::size_t mu_replicates = cfg.get_size("mu_replicates", 64);
    const double mu_intensity = cfg.get_double("mu_intensity", 500.0);
    std::vector<std::size_t> sweep = parse_sweep(cfg.get_str("n_sweep", "500:1000:2000:4000"));

    cfg.ensure_all_consumed();
    cfg.set("amplitude", fmt_double(amplitude));
    cfg.set("p", fmt_double(p));
    cfg.set("s", fmt_double(s));
    cfg.set("K", std::to_string(K));
    cfg.set("reference_grid", std::to_string(grid_n));
    cfg.set("eps", fmt_double(eps));
    cfg.set("bandwidth_scale", fmt_double(bandwidth_scale));
    cfg.set("seeds", std::to_string(seeds));
    cfg.set("seed", std::to_string(seed0));
    cfg.set("mu_replicates", std::to_string(mu_replicates));
    cfg.set("mu_intensity", fmt_double(mu_intensity));
    cfg.set("n_sweep", sweep_text(sweep));

    const DensityModel model =
        amplitude == 0.0 ? DensityModel::uniform({DomainKind::Circle, {}, {}})
                         : DensityModel::sine_circle(amplitude);

    const double eps_used = std::min(eps, 0.9 / (8.0 * p + 6.0));
    cfg.set("eps_used", fmt_double(eps_used));

    CircleConvergenceResult res;
    res.n_values = sweep;
    res.mu_hat = 1.0;
    if (p != 1.0)
        res.mu_hat = estimate_mu(p, 1, 1.0, mu_intensity, mu_replicates, seed0 ^ 0x51c).mean;
    const double mu2 = res.mu_hat * res.mu_hat;

    const Vec reference = continuum_spectrum_1d(model, p, s, grid_n, K);

    for (const std::size_t n : sweep) {
        const double h = bandwidth_scale * bandwidth_rule(n, 1, eps_used, p, model.beta(), res.mu_hat);
        std::vector<double> errs;
        for (std::size_t sd = 0; sd < seeds; ++sd) {
            const PointCloud cloud = sample_iid(model, n, seed0 + 1000 * sd + n);
            FermatParams params;
            params.p = p;
            params.m = 1;
            params.mode = FermatParams::Mode::Exact;
            const DistanceMatrix norm =
                normalize_fermat(fermat_pairwise(cloud, params), n, params);
            const SparseWeightedGraph w = build_weights(norm.values, h, 1);
            const SpectralDecomposition dec = eig_smallest(w, K, [&] {
                EigOptions o;
                o.scale = 2.0 * 3.0 / (h * h);
                return o;
            }());
            for (std::size_t k = 0; k < K; ++k)
                res.rows.push_back({static_cast<double>(n), static_cast<double>(k + 1),
                                    mu2 * dec.eigenvalues[k], reference[k]});
            errs.push_back(std::abs(mu2 * dec.eigenvalues[1] - reference[1]) /
                           std::abs(reference[1]));
        }
        res.rel_err_lambda2.push_back(errs);
        res.median_rel_err_lambda2.push_back(median_of(errs));
    }

    write_csv(out_dir + "/circle_convergence.csv",
              {"n", "k", "lambda_graph", "lambda_fd_reference"}, res.rows);
    {
        std::vector<Vec> grows;
        for (std::size_t i = 0; i < sweep.size(); ++i)
            grows.push_back({static_cast<double>(sweep[i]), res.median_rel_err_lambda2[i]});
        write_csv(out_dir + "/circle_convergence_err.csv", {"n", "median_rel_err_lambda2"}, grows);
    }
    cfg.set("mu_hat", fmt_double(res.mu_hat));
    write_sidecar(cfg, out_dir, "circle_convergence");
    return res;
}

void run_fermat_ball(Config& cfg, const std::string& out_dir) {
    ensure_dir(out_dir);
    const double p = cfg.get_double("p", 3.0);
    const double slope = cfg.get_double("slope", 1.0);
    const std::size_t n_dirs = cfg.get_size("n_dirs", 256);
    const double dt = cfg.get_double("dt", 1e-3);
    std::vector<double> radii = parse_grid(cfg.get_str("radii", "0.15:0.35"));

    cfg.ensure_all_consumed();
    cfg.set("p", fmt_double(p));
    cfg.set("slope", fmt_double(slope));
    cfg.set("n_dirs", std::to_string(n_dirs));
    cfg.set("dt", fmt_double(dt));

    Domain box;
    box.kind = DomainKind::Box;
    box.lo = {-0.5, -0.5};
    box.hi = {0.5, 0.5};
    const DensityModel model = DensityModel::linear(box, slope);
    const Vec center{0.0, 0.0};

    Svg svg(480, 480, -0.55, 0.55, -0.55, 0.55);
    svg.axes();
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::size_t ci = 0;
    for (const double T : radii) {
        const FermatBall ball = fermat_ball(model, center, T, n_dirs, p, dt);
        std::vector<Vec> rows;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < ball.boundary.size(); ++i) {
            const double angle =
                2.0 * M_PI * static_cast<double>(i % n_dirs) / static_cast<double>(n_dirs);
            rows.push_back({angle, ball.boundary[i][0], ball.boundary[i][1]});
            pts.emplace_back(ball.boundary[i][0], ball.boundary[i][1]);
        }
        std::ostringstream name;
        name << out_dir << "/fermat_ball_T" << fmt_double(T) << ".csv";
        write_csv(name.str(), {"t", "x1", "x2"}, rows);
        svg.polyline(pts, colors[ci++ % 4], 1.5);
    }
    write_text_file(out_dir + "/fermat_ball.svg", svg.str());
    {
        std::ostringstream os;
        for (std::size_t i = 0; i < radii.size(); ++i) os << (i ? ":" : "") << fmt_double(radii[i]);
        cfg.set("radii", os.str());
    }
    write_sidecar(cfg, out_dir, "fermat_ball");
}

}  // namespace fermat
