#include "wkd/dtm.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "wkd/parallel.hpp"

namespace wkd {

KDistance::KDistance(const NeighborIndex& index, int k) : index_(&index), k_(k) {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > index.size()) {
        throw std::runtime_error("k exceeds cloud size");
    }
}

double KDistance::eval(std::span<const double> x) const {
    const auto nn = index_->query(x, k_);
    double s = 0.0;
    for (int idx : nn) {
        s += dist2(x, index_->cloud().point(idx));
    }
    return std::sqrt(s / k_);
}

double DiscreteMeasure::total_mass() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
}

void DiscreteMeasure::validate() const {
    support.validate();
    if (static_cast<int>(masses.size()) != support.size()) {
        throw std::runtime_error("measure has a mass count different from its support size");
    }
    for (double m : masses) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw std::runtime_error("measure masses must be positive and finite");
        }
    }
    if (denominator && *denominator < 1) {
        throw std::runtime_error("measure denominator must be positive");
    }
}

DiscreteMeasure DiscreteMeasure::uniform_on(const PointCloud& cloud) {
    cloud.validate();
    DiscreteMeasure mu;
    mu.support = cloud;
    mu.masses.assign(cloud.size(), 1.0 / cloud.size());
    mu.denominator = cloud.size();
    return mu;
}

DiscreteMeasure DiscreteMeasure::dirac(std::span<const double> p) {
    DiscreteMeasure mu;
    mu.support.push_back(p);
    mu.masses.assign(1, 1.0);
    mu.denominator = 1;
    return mu;
}

double eval_dtm(const DiscreteMeasure& mu, double m0, std::span<const double> x) {
    mu.validate();
    const double total = mu.total_mass();
    if (!(m0 > 0.0) || m0 > total + 1e-9) {
        throw std::invalid_argument("mass parameter must lie in (0, total mass]");
    }
    const int n = mu.support.size();
    std::vector<std::pair<double, int>> by_dist(n);
    for (int i = 0; i < n; ++i) {
        by_dist[i] = {dist2(x, mu.support.point(i)), i};
    }
    std::sort(by_dist.begin(), by_dist.end());

    double acc_mass = 0.0;
    double acc_sq = 0.0;
    for (const auto& [d2, i] : by_dist) {
        const double take = std::min(mu.masses[i], m0 - acc_mass);
        acc_sq += take * d2;
        acc_mass += take;
        if (acc_mass >= m0) break;
    }
    return std::sqrt(acc_sq / m0);
}

WitnessedKDistance::WitnessedKDistance(const NeighborIndex& index, int k)
    : k_(k), n_(index.size()) {
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > n_) {
        throw std::runtime_error("k exceeds cloud size");
    }
    const PointCloud& cloud = index.cloud();
    std::vector<WeightedSite> sites(n_);
    parallel_for(0, n_, [&](int i) {
        // k nearest including i itself (ties by index); drop i, or the worst
        // entry when duplicates with smaller index crowded i out. What
        // remains are the k-1 nearest among the other points.
        std::vector<int> ids = index.query(cloud.point(i), k);
        auto self = std::find(ids.begin(), ids.end(), i);
        if (self != ids.end()) {
            ids.erase(self);
        } else {
            ids.pop_back();
        }
        ids.insert(ids.begin(), i);
        sites[i] = barycenter_site(cloud, ids);
    });
    sites_ = std::make_unique<PowerDistance>(std::move(sites));
}

WitnessedKDistance witnessed_sites(const NeighborIndex& index, int k) {
    return WitnessedKDistance(index, k);
}

WitnessedKDistance witnessed_sites(const PointCloud& cloud, int k) {
    NeighborIndex index(cloud);
    return WitnessedKDistance(index, k);
}

int64_t binomial_guarded(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    int64_t c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > 4'000'000) return c;  // saturate well above the guard
    }
    return c;
}

PowerDistance brute_force_sites(const PointCloud& cloud, int k) {
    cloud.validate();
    const int n = cloud.size();
    if (k < 1) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > n) {
        throw std::runtime_error("k exceeds cloud size");
    }
    if (binomial_guarded(n, k) > 1'000'000) {
        throw guard_error("instance too large for oracle");
    }

    std::vector<WeightedSite> sites;
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = i;
    while (true) {
        sites.push_back(barycenter_site(cloud, subset));
        int pos = k - 1;
        while (pos >= 0 && subset[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (int j = pos + 1; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
    return PowerDistance(std::move(sites));
}

}  // namespace wkd
