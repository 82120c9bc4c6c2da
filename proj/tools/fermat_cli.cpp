#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "fermat/errors.hpp"
#include "fermat/experiments.hpp"
#include "fermat/geodesic.hpp"
#include "fermat/io.hpp"
#include "fermat/spectral.hpp"

using namespace fermat;

namespace {

struct Common {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "flat key = value config file");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "RNG seed");
    cmd->add_option("--set", c.sets, "override config entries as key=value");
}

Config load_config(const Common& c, const std::vector<std::string>& sets) {
    Config cfg = c.config_path.empty() ? Config() : Config::load(c.config_path);
    for (const std::string& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key=value, got " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!cfg.has("seed")) cfg.set("seed", std::to_string(c.seed));
    return cfg;
}

DensityModel model_from_config(Config& cfg) {
    const std::string kind = cfg.get_str("model", "uniform");
    const std::string domain = cfg.get_str("domain", "box");
    Domain d;
    if (domain == "box") {
        d.kind = DomainKind::Box;
        d.lo = {cfg.get_double("lo1", 0.0), cfg.get_double("lo2", 0.0)};
        d.hi = {cfg.get_double("hi1", 1.0), cfg.get_double("hi2", 1.0)};
    } else if (domain == "disk") {
        d.kind = DomainKind::Disk;
    } else if (domain == "circle") {
        d.kind = DomainKind::Circle;
    } else {
        throw ConfigError("domain must be box, disk or circle");
    }
    if (kind == "uniform") return DensityModel::uniform(d);
    if (kind == "linear") return DensityModel::linear(d, cfg.get_double("slope", 1.0));
    if (kind == "disk_valley") return DensityModel::disk_valley(cfg.get_double("tau", 0.25));
    if (kind == "gaussian_mixture_bg")
        return DensityModel::gaussian_mixture_bg(
            d, {cfg.get_double("mean1_x", -0.5), cfg.get_double("mean1_y", 0.0)},
            {cfg.get_double("mean2_x", 0.5), cfg.get_double("mean2_y", 0.0)},
            cfg.get_double("sigma", 0.2), cfg.get_double("tau", 0.25));
    if (kind == "sine_circle") return DensityModel::sine_circle(cfg.get_double("amplitude", 0.5));
    if (kind == "two_partitions")
        return make_two_partitions_model(cfg.get_double("strip_ratio", 0.2),
                                         cfg.get_double("strip_width", 0.3));
    throw ConfigError("unknown model: " + kind);
}

PointCloud cloud_from_config(Config& cfg, const std::string& out_dir) {
    const std::string input = cfg.get_str("input", "");
    if (!input.empty())
        return read_point_cloud_csv(input, cfg.get_size("m", 2));
    DensityModel model = model_from_config(cfg);
    const std::size_t n = cfg.get_size("n", 1000);
    const std::uint64_t seed = cfg.get_u64("seed", 0);
    (void)out_dir;
    return sample_iid(model, n, seed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density-weighted shortest-path metrics, spectral clustering, and the"
                 " companion experiment drivers"};
    app.require_subcommand(1);

    Common common;

    auto* c_sample = app.add_subcommand("sample", "draw a point cloud from a built-in density");
    auto* c_dist = app.add_subcommand("fermat-dist", "pairwise Fermat distance table");
    auto* c_lap = app.add_subcommand("laplacian", "kernel graph + Laplacian serialization");
    auto* c_spec = app.add_subcommand("spectra", "bottom eigenvalues of a Laplacian");
    auto* c_cfd = app.add_subcommand("cluster-fd", "Fermat distance spectral clustering");
    auto* c_cdn = app.add_subcommand("cluster-dn", "degree-normalized spectral clustering");
    auto* c_ball = app.add_subcommand("geodesic-ball", "Fermat geodesic balls");
    auto* c_mu = app.add_subcommand("estimate-mu", "Monte-Carlo percolation constant");
    auto* c_exp = app.add_subcommand("exp", "experiment drivers");
    auto* e_two = c_exp->add_subcommand("two-partitions", "accuracy transition in p");
    auto* e_eig = c_exp->add_subcommand("eig-convergence", "Fermat vs degree-normalized spectra");
    auto* e_circ = c_exp->add_subcommand("circle-convergence", "graph spectra vs the 1-D reference");
    for (CLI::App* cmd : {c_sample, c_dist, c_lap, c_spec, c_cfd, c_cdn, c_ball, c_mu,
                          e_two, e_eig, e_circ})
        add_common(cmd, common);

    CLI11_PARSE(app, argc, argv);

    try {
        std::filesystem::create_directories(common.out_dir);
        const std::string out = common.out_dir;

        if (c_sample->parsed()) {
            Config cfg = load_config(common, common.sets);
            DensityModel model = model_from_config(cfg);
            const std::size_t n = cfg.get_size("n", 1000);
            const std::uint64_t seed = cfg.get_u64("seed", 0);
            const bool ppp = cfg.get_bool("ppp", false);
            cfg.ensure_all_consumed();
            const PointCloud cloud =
                ppp ? sample_ppp(model, static_cast<double>(n), seed) : sample_iid(model, n, seed);
            write_point_cloud_csv(out + "/points.csv", cloud);
            write_text_file(out + "/model.config", model.config_text());
            std::cout << "wrote " << cloud.size() << " points to " << out << "/points.csv\n";
        } else if (c_dist->parsed()) {
            Config cfg = load_config(common, common.sets);
            const PointCloud cloud = cloud_from_config(cfg, out);
            FermatParams params;
            params.p = cfg.get_double("p", 2.0);
            params.m = cfg.get_size("m", cloud.intrinsic_dim ? cloud.intrinsic_dim : 2);
            params.mode = cfg.get_str("mode", "exact") == "knn" ? FermatParams::Mode::Knn
                                                                : FermatParams::Mode::Exact;
            params.k = cfg.get_size("knn_k", 0);
            const bool normalized = cfg.get_bool("normalize", true);
            const bool sparse = cfg.get_bool("sparse", false);
            cfg.ensure_all_consumed();
            DistanceMatrix dm = fermat_pairwise(cloud, params);
            if (normalized) dm = normalize_fermat(dm, cloud.size(), params);
            write_distance_matrix_csv(out + "/distances.csv", dm, sparse);
            std::cout << "wrote " << out << "/distances.csv\n";
        } else if (c_lap->parsed() || c_spec->parsed()) {
            Config cfg = load_config(common, common.sets);
            const PointCloud cloud = cloud_from_config(cfg, out);
            const std::size_t n = cloud.size();
            LaplacianSpec spec;
            spec.m = cfg.get_size("m", cloud.intrinsic_dim ? cloud.intrinsic_dim : 2);
            spec.n = n;
            const std::string mode = cfg.get_str("laplacian", "fermat_ps");
            FermatParams params;
            params.m = spec.m;
            Mat kernel_arg;
            if (mode == "fermat_ps") {
                spec.mode = LaplacianSpec::Mode::FermatPs;
                spec.p = cfg.get_double("p", 2.0);
                spec.s = cfg.get_double("s", 2.0);
                params.p = spec.p;
                params.mode = n <= cfg.get_size("exact_cap", 2000) ? FermatParams::Mode::Exact
                                                                   : FermatParams::Mode::Knn;
                kernel_arg = normalize_fermat(fermat_pairwise(cloud, params), n, params).values;
            } else if (mode == "jqr") {
                spec.mode = LaplacianSpec::Mode::Jqr;
                spec.j = cfg.get_double("j", 2.0);
                spec.q = cfg.get_double("q", 2.0);
                spec.r = cfg.get_double("r", 0.0);
                kernel_arg = euclidean_pairwise(cloud);
            } else {
                throw ConfigError("laplacian must be fermat_ps or jqr");
            }
            spec.h = cfg.has("h") ? cfg.get_double("h", 1.0)
                                  : distance_quantile(kernel_arg,
                                                      cfg.get_double("bandwidth_quantile", 0.05));
            const SparseWeightedGraph w = build_weights(kernel_arg, spec.h, spec.m);
            if (c_lap->parsed()) {
                cfg.ensure_all_consumed();
                write_graph_csv(out + "/graph.csv", w, spec);
                std::cout << "wrote " << out << "/graph.csv (h = " << spec.h << ")\n";
            } else {
                const std::size_t K = cfg.get_size("K", 10);
                cfg.ensure_all_consumed();
                const SpectralDecomposition dec = eig_smallest(spec, w, K);
                std::vector<Vec> rows;
                for (std::size_t k = 0; k < dec.size(); ++k)
                    rows.push_back({static_cast<double>(k + 1), dec.eigenvalues[k],
                                    dec.residuals[k]});
                write_csv(out + "/spectra.csv", {"k", "lambda", "residual"}, rows);
                std::cout << "wrote " << out << "/spectra.csv\n";
            }
        } else if (c_cfd->parsed() || c_cdn->parsed()) {
            Config cfg = load_config(common, common.sets);
            const PointCloud cloud = cloud_from_config(cfg, out);
            const std::size_t r = cfg.get_size("r", 2);
            const std::size_t k = cfg.get_size("k", 2);
            const std::uint64_t seed = cfg.get_u64("seed", 0);
            PipelineOptions opts;
            opts.exact_cap = cfg.get_size("exact_cap", 2000);
            opts.raw_lp = cfg.get_bool("raw_lp", false);
            opts.row_normalize = cfg.get_bool("row_normalize", false);
            PipelineResult pr;
            Config sidecar;
            if (c_cfd->parsed()) {
                const double p = cfg.get_double("p", 2.0);
                const double s = cfg.get_double("s", 2.0);
                double h = cfg.get_double("h", 0.0);
                // epsilon is the clustering algorithm's name for the scale.
                if (h == 0.0) h = cfg.get_double("epsilon", 0.0);
                if (h == 0.0) {
                    FermatParams params;
                    params.p = p;
                    params.m = cloud.intrinsic_dim;
                    params.mode = cloud.size() <= opts.exact_cap ? FermatParams::Mode::Exact
                                                                 : FermatParams::Mode::Knn;
                    const DistanceMatrix norm =
                        normalize_fermat(fermat_pairwise(cloud, params), cloud.size(), params);
                    h = distance_quantile(norm.values,
                                          cfg.get_double("bandwidth_quantile", 0.05));
                }
                cfg.ensure_all_consumed();
                pr = spectral_cluster_fd(cloud, p, s, h, r, k, seed, opts);
                sidecar.set("pipeline", "fd");
                sidecar.set("p", fmt_double(p));
                sidecar.set("s", fmt_double(s));
            } else {
                const double q = cfg.get_double("q", 2.0);
                const double j = cfg.get_double("j", 2.0);
                double h = cfg.get_double("h", 0.0);
                if (h == 0.0)
                    h = distance_quantile(euclidean_pairwise(cloud),
                                          cfg.get_double("bandwidth_quantile", 0.05));
                cfg.ensure_all_consumed();
                pr = spectral_cluster_dn(cloud, q, j, h, r, k, seed, opts);
                sidecar.set("pipeline", "dn");
                sidecar.set("q", fmt_double(q));
                sidecar.set("j", fmt_double(j));
            }
            sidecar.set("h", fmt_double(pr.h));
            sidecar.set("r", std::to_string(r));
            sidecar.set("k", std::to_string(k));
            sidecar.set("seed", std::to_string(seed));
            sidecar.set("n", std::to_string(cloud.size()));
            write_labels_csv(out + "/labels.csv", pr.labels);
            write_text_file(out + "/labels.config", sidecar.text());
            std::cout << "wrote " << out << "/labels.csv\n";
        } else if (c_ball->parsed()) {
            Config cfg = load_config(common, common.sets);
            run_fermat_ball(cfg, out);
            std::cout << "wrote geodesic balls to " << out << "\n";
        } else if (c_mu->parsed()) {
            Config cfg = load_config(common, common.sets);
            const double p = cfg.get_double("p", 2.0);
            const std::size_t m = cfg.get_size("m", 2);
            const double r = cfg.get_double("r", 1.0);
            const double intensity = cfg.get_double("intensity", 2000.0);
            const std::size_t replicates = cfg.get_size("replicates", 200);
            const std::uint64_t seed = cfg.get_u64("seed", 0);
            cfg.ensure_all_consumed();
            const MuEstimate est = estimate_mu(p, m, r, intensity, replicates, seed);
            std::vector<Vec> rows;
            for (std::size_t i = 0; i < est.values.size(); ++i)
                rows.push_back({static_cast<double>(i), est.values[i]});
            write_csv(out + "/mu_replicates.csv", {"replicate", "value"}, rows);
            std::ostringstream os;
            os << "mean = " << fmt_double(est.mean) << "\nstderr = " << fmt_double(est.stderr_)
               << "\nreplicates = " << est.replicates << "\nempties = " << est.empties << "\n";
            write_text_file(out + "/mu_summary.txt", os.str());
            std::cout << "mu(p=" << p << ", m=" << m << ") = " << est.mean << " +- "
                      << est.stderr_ << "\n";
        } else if (e_two->parsed()) {
            Config cfg = load_config(common, common.sets);
            run_two_partitions(cfg, out);
            std::cout << "wrote " << out << "/two_partitions.csv\n";
        } else if (e_eig->parsed()) {
            Config cfg = load_config(common, common.sets);
            run_eig_convergence(cfg, out);
            std::cout << "wrote " << out << "/eig_convergence.csv\n";
        } else if (e_circ->parsed()) {
            Config cfg = load_config(common, common.sets);
            run_circle_convergence(cfg, out);
            std::cout << "wrote " << out << "/circle_convergence.csv\n";
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
