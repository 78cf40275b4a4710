#include "wkd/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkd/io.hpp"
#include "wkd/parallel.hpp"

namespace wkd {

BoundingBox2D BoundingBox2D::of_cloud(const PointCloud& cloud, double inflate) {
    if (cloud.dim() != 2) {
        throw std::invalid_argument("2D bounding box needs a 2D cloud");
    }
    const auto b = cloud.bounding_box();
    return BoundingBox2D{b[0] - inflate, b[2] + inflate, b[1] - inflate, b[3] + inflate};
}

ScalarField2D::ScalarField2D(BoundingBox2D box, int nx, int ny) : box_(box), nx_(nx), ny_(ny) {
    if (nx < 2 || ny < 2) {
        throw std::invalid_argument("grid resolution must be at least 2x2");
    }
    if (box.degenerate()) {
        throw std::invalid_argument("degenerate bounding box");
    }
    dx_ = (box.xmax - box.xmin) / nx;
    dy_ = (box.ymax - box.ymin) / ny;
    values_.assign(static_cast<size_t>(nx) * ny, 0.0);
}

double ScalarField2D::min_value() const {
    return *std::min_element(values_.begin(), values_.end());
}

double ScalarField2D::max_value() const {
    return *std::max_element(values_.begin(), values_.end());
}

void ScalarField2D::validate() const {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("scalar field contains non-finite values");
        }
    }
}

bool ScalarField2D::lipschitz_consistent(double lipschitz_constant) const {
    const double bound = lipschitz_constant * grid_spacing() * std::sqrt(2.0) + 1e-9;
    for (int iy = 0; iy < ny_; ++iy) {
        for (int ix = 0; ix < nx_; ++ix) {
            if (ix + 1 < nx_ && std::abs(value(ix, iy) - value(ix + 1, iy)) > bound) return false;
            if (iy + 1 < ny_ && std::abs(value(ix, iy) - value(ix, iy + 1)) > bound) return false;
        }
    }
    return true;
}

ScalarField2D rasterize(const std::function<double(double, double)>& f, BoundingBox2D box,
                        int nx, int ny) {
    ScalarField2D field(box, nx, ny);
    parallel_for(0, ny, [&](int iy) {
        const double y = field.cell_y(iy);
        for (int ix = 0; ix < nx; ++ix) {
            field.set_value(ix, iy, f(field.cell_x(ix), y));
        }
    });
    field.validate();
    return field;
}

std::string field_to_csv(const ScalarField2D& field) {
    std::string out = "# scalarfield2d nx=" + std::to_string(field.nx()) +
                      " ny=" + std::to_string(field.ny()) +
                      " xmin=" + fmt_double(field.box().xmin) +
                      " xmax=" + fmt_double(field.box().xmax) +
                      " ymin=" + fmt_double(field.box().ymin) +
                      " ymax=" + fmt_double(field.box().ymax) + "\n";
    for (int iy = 0; iy < field.ny(); ++iy) {
        for (int ix = 0; ix < field.nx(); ++ix) {
            if (ix) out += ',';
            out += fmt_double(field.value(ix, iy));
        }
        out += '\n';
    }
    return out;
}

ScalarField2D field_from_csv(const std::string& text) {
    std::stringstream ss(text);
    std::string line;
    BoundingBox2D box;
    int nx = 0, ny = 0;
    bool have_header = false;
    std::vector<double> values;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::stringstream fields(line.substr(1));
            std::string token;
            while (fields >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string val = token.substr(eq + 1);
                if (key == "nx") nx = std::stoi(val);
                else if (key == "ny") ny = std::stoi(val);
                else if (key == "xmin") box.xmin = parse_double(val);
                else if (key == "xmax") box.xmax = parse_double(val);
                else if (key == "ymin") box.ymin = parse_double(val);
                else if (key == "ymax") box.ymax = parse_double(val);
            }
            have_header = true;
            continue;
        }
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            values.push_back(parse_double(cell));
        }
    }
    if (!have_header || nx < 2 || ny < 2) {
        throw std::runtime_error("field csv is missing its resolution header");
    }
    if (values.size() != static_cast<size_t>(nx) * ny) {
        throw std::runtime_error("field csv value count does not match nx*ny");
    }
    ScalarField2D field(box, nx, ny);
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            field.set_value(ix, iy, values[static_cast<size_t>(iy) * nx + ix]);
        }
    }
    field.validate();
    return field;
}

}  // namespace wkd
