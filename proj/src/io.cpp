#include "fermat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "fermat/errors.hpp"

namespace fermat {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

void write_point_cloud_csv(const std::string& path, const PointCloud& cloud) {
    std::ostringstream os;
    for (std::size_t d = 0; d < cloud.ambient_dim(); ++d)
        os << (d ? "," : "") << "x" << d + 1;
    os << "\n";
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t d = 0; d < cloud.ambient_dim(); ++d)
            os << (d ? "," : "") << fmt_double(cloud.points(i, d));
        os << "\n";
    }
    write_text_file(path, os.str());
}

PointCloud read_point_cloud_csv(const std::string& path, std::size_t intrinsic_dim) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line)) throw Error("empty point cloud file " + path);
    std::size_t dim = 1;
    for (const char c : line)
        if (c == ',') ++dim;
    std::vector<Vec> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Vec row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != dim) throw Error("ragged row in " + path);
        rows.push_back(std::move(row));
    }
    PointCloud cloud;
    cloud.points = Mat(rows.size(), dim);
    cloud.intrinsic_dim = intrinsic_dim;
    cloud.model_tag = "csv:" + path;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t d = 0; d < dim; ++d) cloud.points(i, d) = rows[i][d];
    return cloud;
}

void write_distance_matrix_csv(const std::string& path, const DistanceMatrix& dm, bool sparse) {
    std::ostringstream os;
    const std::size_t n = dm.values.rows();
    os << "# p=" << fmt_double(dm.p) << " m=" << dm.m << " n=" << n
       << " normalized=" << (dm.normalized ? 1 : 0) << " scale=" << fmt_double(dm.scale) << "\n";
    if (sparse) {
        os << "i,j,value\n";
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (dm.values(i, j) != 0.0)
                    os << i << "," << j << "," << fmt_double(dm.values(i, j)) << "\n";
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                os << (j ? "," : "") << fmt_double(dm.values(i, j));
            os << "\n";
        }
    }
    write_text_file(path, os.str());
}

void write_graph_csv(const std::string& path, const SparseWeightedGraph& g,
                     const LaplacianSpec& spec) {
    std::ostringstream os;
    os << "# {\"n\": " << g.size() << ", \"h\": " << fmt_double(spec.h) << ", \"m\": " << spec.m
       << ", \"mode\": \"" << spec.mode_name() << "\"}\n";
    os << "i,j,w\n";
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t e = g.row_begin(i); e < g.row_end(i); ++e)
            if (g.col(e) >= i) os << i << "," << g.col(e) << "," << fmt_double(g.value(e)) << "\n";
    write_text_file(path, os.str());
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<Vec>& rows) {
    std::ostringstream os;
    for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
    os << "\n";
    for (const Vec& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << fmt_double(row[c]);
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::ostringstream os;
    os << "index,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) os << i << "," << labels[i] << "\n";
    write_text_file(path, os.str());
}

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    const auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
        c.set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_text_file(path)); }

std::string Config::text() const {
    std::ostringstream os;
    for (const auto& [k, v] : entries_) os << k << " = " << v << "\n";
    return os.str();
}

void Config::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries_)
        if (k == key) {
            v = value;
            return;
        }
    entries_.emplace_back(key, value);
}

bool Config::has(const std::string& key) const {
    for (const auto& [k, v] : entries_)
        if (k == key) return true;
    return false;
}

std::string Config::raw_get(const std::string& key) {
    consumed_.insert(key);
    for (const auto& [k, v] : entries_)
        if (k == key) return v;
    return {};
}

std::string Config::get_str(const std::string& key, const std::string& fallback) {
    const std::string v = raw_get(key);
    return v.empty() ? fallback : v;
}

double Config::get_double(const std::string& key, double fallback) {
    const std::string v = raw_get(key);
    return v.empty() ? fallback : std::stod(v);
}

std::size_t Config::get_size(const std::string& key, std::size_t fallback) {
    const std::string v = raw_get(key);
    return v.empty() ? fallback : static_cast<std::size_t>(std::stoull(v));
}

std::uint64_t Config::get_u64(const std::string& key, std::uint64_t fallback) {
    const std::string v = raw_get(key);
    return v.empty() ? fallback : std::stoull(v);
}

bool Config::get_bool(const std::string& key, bool fallback) {
    const std::string v = raw_get(key);
    if (v.empty()) return fallback;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("boolean expected for key " + key);
}

void Config::ensure_all_consumed() const {
    for (const auto& [k, v] : entries_)
        if (!consumed_.count(k)) throw ConfigError("unknown config key: " + k);
}

Svg::Svg(double width, double height, double x0, double x1, double y0, double y1)
    : w_(width), h_(height), x0_(x0), x1_(x1), y0_(y0), y1_(y1) {}

double Svg::px(double x) const { return (x - x0_) / (x1_ - x0_) * (w_ - 80.0) + 40.0; }
double Svg::py(double y) const { return h_ - 40.0 - (y - y0_) / (y1_ - y0_) * (h_ - 80.0); }

void Svg::polyline(const std::vector<std::pair<double, double>>& pts, const std::string& color,
                   double stroke_width, bool close) {
    std::ostringstream os;
    os << "<" << (close ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"" << stroke_width << "\" points=\"";
    for (const auto& [x, y] : pts) os << px(x) << "," << py(y) << " ";
    os << "\"/>\n";
    body_ += os.str();
}

void Svg::circle(double x, double y, double radius_px, const std::string& color) {
    std::ostringstream os;
    os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << radius_px
       << "\" fill=\"" << color << "\"/>\n";
    body_ += os.str();
}

void Svg::text(double x, double y, const std::string& s, int pxsize) {
    std::ostringstream os;
    os << "<text x=\"" << px(x) << "\" y=\"" << py(y) << "\" font-size=\"" << pxsize
       << "\" font-family=\"sans-serif\">" << s << "</text>\n";
    body_ += os.str();
}

void Svg::axes() {
    std::ostringstream os;
    os << "<line x1=\"40\" y1=\"" << h_ - 40.0 << "\" x2=\"" << w_ - 40.0 << "\" y2=\""
       << h_ - 40.0 << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"40\" y1=\"40\" x2=\"40\" y2=\"" << h_ - 40.0 << "\" stroke=\"black\"/>\n";
    body_ += os.str();
}

std::string Svg::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
       << "\">\n"
       << body_ << "</svg>\n";
    return os.str();
}

}  // namespace fermat
