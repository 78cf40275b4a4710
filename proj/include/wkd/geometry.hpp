#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wkd {

// Size/combinatorial guard violations map to their own exit code in the CLI,
// so they get a distinct exception type.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Points in R^d stored row-major in a flat array. d is dynamic, d >= 1.
class PointCloud {
public:
    PointCloud() = default;
    PointCloud(int dim, std::vector<double> coords);

    int dim() const { return dim_; }
    int size() const { return dim_ == 0 ? 0 : static_cast<int>(coords_.size()) / dim_; }
    bool empty() const { return coords_.empty(); }

    std::span<const double> point(int i) const {
        return std::span<const double>(coords_.data() + static_cast<size_t>(i) * dim_, dim_);
    }
    const std::vector<double>& coords() const { return coords_; }

    void push_back(std::span<const double> p);

    // Throws if any coordinate is non-finite, the cloud is empty, or row
    // lengths disagree (cannot happen with flat storage, checked at ctor).
    void validate() const;

    // Axis-aligned bounding box as [min_0..min_{d-1}, max_0..max_{d-1}].
    std::vector<double> bounding_box() const;
    double diameter_upper_bound() const;  // bbox diagonal
    double diameter_exact() const;        // max pairwise distance, O(N^2)

private:
    int dim_ = 0;
    std::vector<double> coords_;
};

inline double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t t = 0; t < a.size(); ++t) {
        const double d = a[t] - b[t];
        s += d * d;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist2(a, b));
}

}  // namespace wkd
