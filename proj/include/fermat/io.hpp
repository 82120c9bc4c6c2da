#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fermat/graph.hpp"
#include "fermat/linalg.hpp"
#include "fermat/metric.hpp"
#include "fermat/sampling.hpp"

namespace fermat {

// Full-precision decimal form (17 significant digits), stable across runs.
std::string fmt_double(double v);

void write_point_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud_csv(const std::string& path, std::size_t intrinsic_dim);

// Dense layout with a one-line header recording {p, m, n, normalized, scale};
// sparse = true writes i,j,value triplets instead.
void write_distance_matrix_csv(const std::string& path, const DistanceMatrix& dm,
                               bool sparse = false);

// Triplet CSV preceded by a JSON metadata line {n, h, m, mode}.
void write_graph_csv(const std::string& path, const SparseWeightedGraph& g,
                     const LaplacianSpec& spec);

// Generic rectangular CSV.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vec>& rows);

void write_labels_csv(const std::string& path, const std::vector<int>& labels);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Flat `key = value` configuration with consumption tracking: keys nobody
// read are reported as errors, so typos fail loudly.
class Config {
  public:
    Config() = default;
    static Config parse(const std::string& text);
    static Config load(const std::string& path);
    std::string text() const;  // lossless round trip, insertion order kept

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;

    std::string get_str(const std::string& key, const std::string& fallback);
    double get_double(const std::string& key, double fallback);
    std::size_t get_size(const std::string& key, std::size_t fallback);
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback);
    bool get_bool(const std::string& key, bool fallback);

    void ensure_all_consumed() const;  // throws ConfigError on unknown keys

  private:
    std::string raw_get(const std::string& key);
    std::vector<std::pair<std::string, std::string>> entries_;
    std::set<std::string> consumed_;
};

// Minimal SVG canvas with a linear data-to-pixel mapping; everything the
// experiments draw is a pure function of the CSV contents.
class Svg {
  public:
    Svg(double width, double height, double x0, double x1, double y0, double y1);
    void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                  double stroke_width = 1.0, bool close = false);
    void circle(double x, double y, double radius_px, const std::string& color);
    void text(double x, double y, const std::string& s, int px = 12);
    void axes();
    std::string str() const;

  private:
    double px(double x) const;
    double py(double y) const;
    double w_, h_, x0_, x1_, y0_, y1_;
    std::string body_;
};

}  // namespace fermat
