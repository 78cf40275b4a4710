#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wkd/geometry.hpp"

namespace wkd {

struct BoundingBox2D {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

    bool degenerate() const { return !(xmax > xmin) || !(ymax > ymin); }
    static BoundingBox2D of_cloud(const PointCloud& cloud, double inflate);
};

/// Regular-grid sampling of a scalar function at cell centers: value(ix, iy)
/// is taken at (xmin + (ix+.5) dx, ymin + (iy+.5) dy), row-major in iy.
class ScalarField2D {
public:
    ScalarField2D(BoundingBox2D box, int nx, int ny);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    const BoundingBox2D& box() const { return box_; }
    double dx() const { return dx_; }
    double dy() const { return dy_; }
    double grid_spacing() const { return std::max(dx_, dy_); }  // h

    double cell_x(int ix) const { return box_.xmin + (ix + 0.5) * dx_; }
    double cell_y(int iy) const { return box_.ymin + (iy + 0.5) * dy_; }

    double value(int ix, int iy) const { return values_[static_cast<size_t>(iy) * nx_ + ix]; }
    void set_value(int ix, int iy, double v) { values_[static_cast<size_t>(iy) * nx_ + ix] = v; }
    const std::vector<double>& values() const { return values_; }

    double min_value() const;
    double max_value() const;
    void validate() const;  // all values finite

    // Axis-neighbor consistency for samples of an L-Lipschitz function:
    // |v(i,j) - v(i+-1,j)| <= L * h * sqrt(2) + 1e-9.
    bool lipschitz_consistent(double lipschitz_constant = 1.0) const;

private:
    BoundingBox2D box_;
    int nx_, ny_;
    double dx_, dy_;
    std::vector<double> values_;
};

/// Samples f at every cell center (rows evaluated in parallel).
ScalarField2D rasterize(const std::function<double(double, double)>& f, BoundingBox2D box,
                        int nx, int ny);

std::string field_to_csv(const ScalarField2D& field);
ScalarField2D field_from_csv(const std::string& text);

}  // namespace wkd
