#pragma once

#include <span>
#include <vector>

#include "wkd/geometry.hpp"

namespace wkd {

/// Exact k-nearest-neighbor index over a point cloud (kd-tree, median split).
///
/// Queries return exactly the same distance multiset as an exhaustive scan;
/// equidistant candidates are ranked by smaller point index. The tree is
/// immutable after construction and safe for concurrent read-only queries.
class NeighborIndex {
public:
    explicit NeighborIndex(const PointCloud& cloud);

    const PointCloud& cloud() const { return *cloud_; }
    int size() const { return cloud_->size(); }

    // Indices of the min(k, N) nearest points, sorted by non-decreasing
    // distance, ties by smaller index.
    std::vector<int> query(std::span<const double> x, int k) const;

    // Squared distance from x to its single nearest point.
    double nearest_dist2(std::span<const double> x) const;

private:
    struct Node {
        int left = -1;    // child node ids; -1 for leaf
        int right = -1;
        int begin = 0;    // leaf: range into order_
        int end = 0;
        std::vector<double> box;  // [min_0.., max_0..]
    };

    int build(int begin, int end);

    const PointCloud* cloud_;
    std::vector<Node> nodes_;
    std::vector<int> order_;
    int root_ = -1;
};

/// k nearest neighbors with strict bounds checking: 1 <= k <= N.
std::vector<int> knn(const NeighborIndex& index, std::span<const double> x, int k);

}  // namespace wkd
