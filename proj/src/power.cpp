#include "wkd/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace wkd {

namespace {

constexpr int kLeafSize = 8;
constexpr double kNegativeClamp = -1e-12;

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

}  // namespace

WeightedSite barycenter_site(const PointCloud& cloud, std::span<const int> indices) {
    if (indices.empty()) {
        throw std::invalid_argument("barycenter of an empty index set");
    }
    std::set<int> seen;
    for (int i : indices) {
        if (i < 0 || i >= cloud.size()) {
            throw std::out_of_range("barycenter index out of range");
        }
        if (!seen.insert(i).second) {
            throw std::invalid_argument("duplicate index in barycenter set");
        }
    }

    const int d = cloud.dim();
    const double k = static_cast<double>(indices.size());
    WeightedSite site;
    site.center.assign(d, 0.0);
    for (int i : indices) {
        auto p = cloud.point(i);
        for (int t = 0; t < d; ++t) site.center[t] += p[t];
    }
    for (int t = 0; t < d; ++t) site.center[t] /= k;

    double spread = 0.0;
    for (int i : indices) {
        spread += dist2(site.center, cloud.point(i));
    }
    site.weight = -spread / k;
    return site;
}

PowerDistance::PowerDistance(std::vector<WeightedSite> sites) {
    if (sites.empty()) {
        throw std::invalid_argument("power distance needs at least one site");
    }
    dim_ = static_cast<int>(sites[0].center.size());
    if (dim_ < 1) {
        throw std::invalid_argument("site dimension must be >= 1");
    }
    const int n = static_cast<int>(sites.size());
    centers_.reserve(static_cast<size_t>(n) * dim_);
    weights_.reserve(n);
    for (const WeightedSite& s : sites) {
        if (static_cast<int>(s.center.size()) != dim_) {
            throw std::invalid_argument("site dimension mismatch");
        }
        for (double c : s.center) {
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite site center");
        }
        if (!std::isfinite(s.weight) || s.weight > 0.0) {
            throw std::invalid_argument("site weight must be <= 0 and finite");
        }
        centers_.insert(centers_.end(), s.center.begin(), s.center.end());
        weights_.push_back(s.weight);
    }
    order_.resize(n);
    for (int i = 0; i < n; ++i) order_[i] = i;
    nodes_.reserve(static_cast<size_t>(2 * n / kLeafSize + 2));
    root_ = build(0, n);
}

int PowerDistance::build(int begin, int end) {
    const int d = dim_;
    Node node;
    node.begin = begin;
    node.end = end;
    node.box.assign(2 * static_cast<size_t>(d), 0.0);
    for (int t = 0; t < d; ++t) {
        node.box[t] = std::numeric_limits<double>::infinity();
        node.box[d + t] = -std::numeric_limits<double>::infinity();
    }
    node.max_weight = -std::numeric_limits<double>::infinity();
    for (int i = begin; i < end; ++i) {
        auto c = center(order_[i]);
        for (int t = 0; t < d; ++t) {
            node.box[t] = std::min(node.box[t], c[t]);
            node.box[d + t] = std::max(node.box[d + t], c[t]);
        }
        node.max_weight = std::max(node.max_weight, weights_[order_[i]]);
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
        return id;
    }

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) {
                         const double ca = centers_[static_cast<size_t>(a) * d + axis];
                         const double cb = centers_[static_cast<size_t>(b) * d + axis];
                         return ca < cb || (ca == cb && a < b);
                     });
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

WeightedSite PowerDistance::site(int i) const {
    WeightedSite s;
    auto c = center(i);
    s.center.assign(c.begin(), c.end());
    s.weight = weights_[i];
    return s;
}

std::vector<WeightedSite> PowerDistance::sites() const {
    std::vector<WeightedSite> out;
    out.reserve(weights_.size());
    for (int i = 0; i < size(); ++i) out.push_back(site(i));
    return out;
}

double PowerDistance::eval_squared(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) {
        throw std::invalid_argument("query dimension mismatch");
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(root_);
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        const Node& node = nodes_[id];
        if (min_dist2_to_box(x, node.box) - node.max_weight >= best) {
            continue;
        }
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int idx = order_[i];
                const double v = dist2(x, center(idx)) - weights_[idx];
                best = std::min(best, v);
            }
        } else {
            const Node& l = nodes_[node.left];
            const Node& r = nodes_[node.right];
            const double bl = min_dist2_to_box(x, l.box) - l.max_weight;
            const double br = min_dist2_to_box(x, r.box) - r.max_weight;
            if (bl <= br) {
                stack.push_back(node.right);
                stack.push_back(node.left);
            } else {
                stack.push_back(node.left);
                stack.push_back(node.right);
            }
        }
    }
    return best;
}

double PowerDistance::eval(std::span<const double> x) const {
    double v = eval_squared(x);
    if (v < 0.0) {
        if (v < kNegativeClamp) {
            throw std::runtime_error("power distance is negative beyond round-off");
        }
        v = 0.0;
    }
    return std::sqrt(v);
}

double eval_power(const PowerDistance& pd, std::span<const double> x) {
    return pd.eval(x);
}

}  // namespace wkd
