#include "wkd/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace wkd {

namespace {

constexpr int kLeafSize = 8;

double min_dist2_to_box(std::span<const double> x, const std::vector<double>& box) {
    const size_t d = x.size();
    double s = 0.0;
    for (size_t t = 0; t < d; ++t) {
        double excess = 0.0;
        if (x[t] < box[t]) {
            excess = box[t] - x[t];
        } else if (x[t] > box[d + t]) {
            excess = x[t] - box[d + t];
        }
        s += excess * excess;
    }
    return s;
}

// (squared distance, point index); smaller compares first on distance, then index.
using Cand = std::pair<double, int>;

}  // namespace

NeighborIndex::NeighborIndex(const PointCloud& cloud) : cloud_(&cloud) {
    if (cloud.empty()) {
        throw std::runtime_error("empty input");
    }
    cloud.validate();
    const int n = cloud.size();
    order_.resize(n);
    for (int i = 0; i < n; ++i) order_[i] = i;
    nodes_.reserve(static_cast<size_t>(2 * n / kLeafSize + 2));
    root_ = build(0, n);
}

int NeighborIndex::build(int begin, int end) {
    const int d = cloud_->dim();
    Node node;
    node.begin = begin;
    node.end = end;
    node.box.assign(2 * static_cast<size_t>(d), 0.0);
    for (int t = 0; t < d; ++t) {
        node.box[t] = std::numeric_limits<double>::infinity();
        node.box[d + t] = -std::numeric_limits<double>::infinity();
    }
    for (int i = begin; i < end; ++i) {
        auto p = cloud_->point(order_[i]);
        for (int t = 0; t < d; ++t) {
            node.box[t] = std::min(node.box[t], p[t]);
            node.box[d + t] = std::max(node.box[d + t], p[t]);
        }
    }

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin <= kLeafSize) {
        return id;
    }

    int axis = 0;
    double widest = -1.0;
    for (int t = 0; t < d; ++t) {
        const double extent = node.box[d + t] - node.box[t];
        if (extent > widest) {
            widest = extent;
            axis = t;
        }
    }
    if (widest <= 0.0) {
        return id;  // all points coincide; keep as leaf
    }

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double ca = cloud_->point(a)[axis];
                         const double cb = cloud_->point(b)[axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

std::vector<int> NeighborIndex::query(std::span<const double> x, int k) const {
    if (static_cast<int>(x.size()) != cloud_->dim()) {
        throw std::invalid_argument("query dimension mismatch");
    }
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    const int n = cloud_->size();
    const int want = std::min(k, n);

    // Max-heap on (dist2, index); the top is the current worst keeper.
    std::priority_queue<Cand> heap;

    // Iterative DFS; visit the nearer child first so the heap fills with good
    // candidates early. Pruning uses strict >, so equal-distance candidates in
    // pruned-boundary boxes are still visited (index tie-break stays exact).
    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(root_);
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        const Node& node = nodes_[id];
        if (static_cast<int>(heap.size()) == want &&
            min_dist2_to_box(x, node.box) > heap.top().first) {
            continue;
        }
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int idx = order_[i];
                const Cand cand(dist2(x, cloud_->point(idx)), idx);
                if (static_cast<int>(heap.size()) < want) {
                    heap.push(cand);
                } else if (cand < heap.top()) {
                    heap.pop();
                    heap.push(cand);
                }
            }
        } else {
            const double dl = min_dist2_to_box(x, nodes_[node.left].box);
            const double dr = min_dist2_to_box(x, nodes_[node.right].box);
            if (dl <= dr) {
                stack.push_back(node.right);
                stack.push_back(node.left);
            } else {
                stack.push_back(node.left);
                stack.push_back(node.right);
            }
        }
    }

    std::vector<Cand> sorted;
    sorted.reserve(heap.size());
    while (!heap.empty()) {
        sorted.push_back(heap.top());
        heap.pop();
    }
    std::reverse(sorted.begin(), sorted.end());
    std::vector<int> out;
    out.reserve(sorted.size());
    for (const Cand& c : sorted) out.push_back(c.second);
    return out;
}

double NeighborIndex::nearest_dist2(std::span<const double> x) const {
    auto nn = query(x, 1);
    return dist2(x, cloud_->point(nn[0]));
}

std::vector<int> knn(const NeighborIndex& index, std::span<const double> x, int k) {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > index.size()) {
        throw std::runtime_error("k exceeds cloud size");
    }
    return index.query(x, k);
}

}  // namespace wkd
