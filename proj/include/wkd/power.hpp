#pragma once

#include <span>
#include <vector>

#include "wkd/geometry.hpp"

namespace wkd {

/// Weighted site of a power distance: a barycenter together with the negated
/// mean squared spread of the points it averages. Weights are always <= 0.
struct WeightedSite {
    std::vector<double> center;
    double weight = 0.0;
};

/// center = mean of the selected points, weight = -(1/k) sum ||center - p||^2.
/// Indices must be distinct and non-empty.
WeightedSite barycenter_site(const PointCloud& cloud, std::span<const int> indices);

/// Lower envelope of x -> ||x - c||^2 - w_c over a non-empty set of weighted
/// sites. Evaluation is exact: the internal kd-tree over centers (with
/// per-subtree weight bounds) prunes sites that cannot attain the minimum but
/// never changes which site does. Immutable and shareable after construction.
class PowerDistance {
public:
    explicit PowerDistance(std::vector<WeightedSite> sites);

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(weights_.size()); }
    WeightedSite site(int i) const;
    std::vector<WeightedSite> sites() const;

    // min_c ||x - c||^2 - w_c, always >= 0 for barycenter-built sites.
    double eval_squared(std::span<const double> x) const;

    // sqrt of eval_squared; round-off down to -1e-12 is clamped to 0.
    double eval(std::span<const double> x) const;

private:
    struct Node {
        int left = -1;
        int right = -1;
        int begin = 0;
        int end = 0;
        double max_weight = 0.0;          // max over subtree (weights <= 0)
        std::vector<double> box;
    };

    int build(int begin, int end);
    std::span<const double> center(int i) const {
        return std::span<const double>(centers_.data() + static_cast<size_t>(i) * dim_, dim_);
    }

    int dim_ = 0;
    std::vector<double> centers_;   // flat, row-major
    std::vector<double> weights_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

/// Free-function form: sqrt(min_c ||x - c||^2 - w_c) with the tiny negative
/// round-off clamp.
double eval_power(const PowerDistance& pd, std::span<const double> x);

}  // namespace wkd
