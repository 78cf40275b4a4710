#include "wkd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wkd {

PointCloud::PointCloud(int dim, std::vector<double> coords)
    : dim_(dim), coords_(std::move(coords)) {
    if (dim_ < 1) {
        throw std::invalid_argument("point dimension must be >= 1");
    }
    if (coords_.size() % static_cast<size_t>(dim_) != 0) {
        throw std::invalid_argument("coordinate array length is not a multiple of the dimension");
    }
    validate();
}

void PointCloud::push_back(std::span<const double> p) {
    if (dim_ == 0) {
        dim_ = static_cast<int>(p.size());
    }
    if (static_cast<int>(p.size()) != dim_) {
        throw std::invalid_argument("point dimension mismatch");
    }
    coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointCloud::validate() const {
    if (coords_.empty()) {
        throw std::runtime_error("empty input");
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) {
            throw std::runtime_error("point cloud contains non-finite coordinate");
        }
    }
}

std::vector<double> PointCloud::bounding_box() const {
    validate();
    std::vector<double> box(2 * static_cast<size_t>(dim_));
    for (int t = 0; t < dim_; ++t) {
        box[t] = std::numeric_limits<double>::infinity();
        box[dim_ + t] = -std::numeric_limits<double>::infinity();
    }
    const int n = size();
    for (int i = 0; i < n; ++i) {
        auto p = point(i);
        for (int t = 0; t < dim_; ++t) {
            box[t] = std::min(box[t], p[t]);
            box[dim_ + t] = std::max(box[dim_ + t], p[t]);
        }
    }
    return box;
}

double PointCloud::diameter_upper_bound() const {
    auto box = bounding_box();
    double s = 0.0;
    for (int t = 0; t < dim_; ++t) {
        const double e = box[dim_ + t] - box[t];
        s += e * e;
    }
    return std::sqrt(s);
}

double PointCloud::diameter_exact() const {
    const int n = size();
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            best = std::max(best, dist2(point(i), point(j)));
        }
    }
    return std::sqrt(best);
}

}  // namespace wkd
