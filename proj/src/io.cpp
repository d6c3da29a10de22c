#include "geomk/io.hpp"

#include <fstream>
#include <sstream>

namespace geomk {

namespace {

// One line -> vector of doubles; empty result for blank/comment lines.
std::vector<double> parse_line(const std::string& line, const std::string& name, long lineno) {
    std::string body = line.substr(0, line.find('#'));
    for (auto& c : body)
        if (c == ',') c = ' ';
    std::istringstream ss(body);
    std::vector<double> vals;
    std::string tok;
    while (ss >> tok) {
        std::size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != tok.size() || !std::isfinite(v))
            throw GeomError(name + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
        vals.push_back(v);
    }
    return vals;
}

std::vector<std::vector<double>> read_rows(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto vals = parse_line(line, name, lineno);
        if (vals.empty()) continue;
        if (width == 0) width = vals.size();
        if (vals.size() != width)
            throw GeomError(name + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(width) + " values, got " + std::to_string(vals.size()));
        rows.push_back(std::move(vals));
    }
    require(!rows.empty(), name + ": no data lines");
    return rows;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    require(f.good(), "cannot open " + path);
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    require(f.good(), "cannot open " + path + " for writing");
    f.precision(17);
    return f;
}

}  // namespace

PointSet read_points_stream(std::istream& in, const std::string& name) {
    auto rows = read_rows(in, name);
    int d = static_cast<int>(rows[0].size());
    check_dim(d);
    std::vector<Vec> pts;
    pts.reserve(rows.size());
    for (const auto& r : rows) {
        Vec p(d);
        for (int j = 0; j < d; ++j) p[j] = r[j];
        pts.push_back(std::move(p));
    }
    return PointSet(std::move(pts), d);
}

PointSet read_points(const std::string& path) {
    auto f = open_in(path);
    return read_points_stream(f, path);
}

void write_points(const std::string& path, const PointSet& s) {
    auto f = open_out(path);
    for (const auto& p : s.pts) {
        for (int j = 0; j < s.dim; ++j) f << (j ? " " : "") << p[j];
        f << "\n";
    }
    require(f.good(), "write failed: " + path);
}

HPolytope read_halfspaces_stream(std::istream& in, const std::string& name, bool check_bounded) {
    auto rows = read_rows(in, name);
    int d = static_cast<int>(rows[0].size()) - 1;
    check_dim(d);
    std::vector<Halfspace> faces;
    faces.reserve(rows.size());
    for (const auto& r : rows) {
        Vec a(d);
        for (int j = 0; j < d; ++j) a[j] = r[j];
        faces.emplace_back(std::move(a), r[d]);
    }
    return HPolytope(std::move(faces), d, check_bounded);
}

HPolytope read_halfspaces(const std::string& path, bool check_bounded) {
    auto f = open_in(path);
    return read_halfspaces_stream(f, path, check_bounded);
}

void write_halfspaces(const std::string& path, const HPolytope& p) {
    auto f = open_out(path);
    for (const auto& h : p.faces()) {
        for (int j = 0; j < p.dim(); ++j) f << h.normal[j] << " ";
        f << h.offset << "\n";
    }
    require(f.good(), "write failed: " + path);
}

}  // namespace geomk
