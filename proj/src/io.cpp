#include "wkd/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wkd {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

// Rows of doubles with a fixed column count; '#' lines skipped.
std::vector<std::vector<double>> parse_numeric_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    size_t width = 0;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        std::vector<double> row;
        for (const std::string& field : split(line, ',')) {
            row.push_back(parse_double(field));
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw std::runtime_error("csv rows have inconsistent column counts");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::runtime_error("empty input");
    }
    return rows;
}

// Pulls "key=value" out of '#' comment lines, e.g. "# sites k=3 n=10 mode=witnessed".
std::string header_value(const std::string& text, const std::string& key) {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty() || line[0] != '#') continue;
        std::stringstream fields(line.substr(1));
        std::string token;
        while (fields >> token) {
            const auto eq = token.find('=');
            if (eq != std::string::npos && token.substr(0, eq) == key) {
                return token.substr(eq + 1);
            }
        }
    }
    return {};
}

}  // namespace

std::string fmt_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text) {
    std::string t = text;
    t.erase(0, t.find_first_not_of(" \t"));
    t.erase(t.find_last_not_of(" \t") + 1);
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) {
        throw std::runtime_error("malformed numeric field '" + text + "'");
    }
    return v;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp + "' for writing");
        out << content;
        if (!out.good()) throw std::runtime_error("error writing '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string point_cloud_to_csv(const PointCloud& cloud) {
    std::string out;
    const int n = cloud.size();
    for (int i = 0; i < n; ++i) {
        auto p = cloud.point(i);
        for (int t = 0; t < cloud.dim(); ++t) {
            if (t) out += ',';
            out += fmt_double(p[t]);
        }
        out += '\n';
    }
    return out;
}

PointCloud point_cloud_from_csv(const std::string& text) {
    const auto rows = parse_numeric_csv(text);
    const int dim = static_cast<int>(rows[0].size());
    std::vector<double> coords;
    coords.reserve(rows.size() * dim);
    for (const auto& row : rows) {
        coords.insert(coords.end(), row.begin(), row.end());
    }
    return PointCloud(dim, std::move(coords));
}

void write_point_cloud(const std::string& path, const PointCloud& cloud) {
    atomic_write_text(path, point_cloud_to_csv(cloud));
}

PointCloud read_point_cloud(const std::string& path) {
    return point_cloud_from_csv(read_text_file(path));
}

std::string sites_to_csv(const PowerDistance& pd, int k, int n, const std::string& mode) {
    std::string out = "# sites k=" + std::to_string(k) + " n=" + std::to_string(n) +
                      " mode=" + mode + "\n";
    for (int i = 0; i < pd.size(); ++i) {
        const WeightedSite s = pd.site(i);
        for (double c : s.center) {
            out += fmt_double(c);
            out += ',';
        }
        out += fmt_double(s.weight);
        out += '\n';
    }
    return out;
}

PowerDistance sites_from_csv(const std::string& text) {
    const auto rows = parse_numeric_csv(text);
    if (rows[0].size() < 2) {
        throw std::runtime_error("site rows need at least one coordinate and a weight");
    }
    std::vector<WeightedSite> sites;
    sites.reserve(rows.size());
    for (const auto& row : rows) {
        WeightedSite s;
        s.center.assign(row.begin(), row.end() - 1);
        s.weight = row.back();
        if (s.weight > 0.0 && s.weight <= 1e-12) s.weight = 0.0;  // serialization round-off
        sites.push_back(std::move(s));
    }
    return PowerDistance(std::move(sites));
}

std::string measure_to_csv(const DiscreteMeasure& mu) {
    std::string out = "# measure";
    if (mu.denominator) out += " denominator=" + std::to_string(*mu.denominator);
    out += '\n';
    const int n = mu.support.size();
    for (int i = 0; i < n; ++i) {
        auto p = mu.support.point(i);
        for (int t = 0; t < mu.support.dim(); ++t) {
            out += fmt_double(p[t]);
            out += ',';
        }
        out += fmt_double(mu.masses[i]);
        out += '\n';
    }
    return out;
}

DiscreteMeasure measure_from_csv(const std::string& text) {
    const auto rows = parse_numeric_csv(text);
    if (rows[0].size() < 2) {
        throw std::runtime_error("measure rows need at least one coordinate and a mass");
    }
    const int dim = static_cast<int>(rows[0].size()) - 1;
    DiscreteMeasure mu;
    std::vector<double> coords;
    for (const auto& row : rows) {
        coords.insert(coords.end(), row.begin(), row.end() - 1);
        mu.masses.push_back(row.back());
    }
    mu.support = PointCloud(dim, std::move(coords));
    const std::string den = header_value(text, "denominator");
    if (!den.empty()) {
        mu.denominator = std::stoll(den);
    }
    mu.validate();
    return mu;
}

void write_measure(const std::string& path, const DiscreteMeasure& mu) {
    atomic_write_text(path, measure_to_csv(mu));
}

DiscreteMeasure read_measure(const std::string& path) {
    return measure_from_csv(read_text_file(path));
}

}  // namespace wkd
