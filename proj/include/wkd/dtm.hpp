#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "wkd/kdtree.hpp"
#include "wkd/power.hpp"

namespace wkd {

/// Exact k-distance to a point cloud: root mean squared distance to the k
/// nearest neighbors, i.e. the distance to the uniform measure on the cloud
/// with mass parameter m0 = k/N. Holds a reference; the index must outlive
/// the evaluator.
class KDistance {
public:
    KDistance(const NeighborIndex& index, int k);

    double eval(std::span<const double> x) const;
    int k() const { return k_; }
    int cloud_size() const { return index_->size(); }
    double m0() const { return static_cast<double>(k_) / cloud_size(); }

private:
    const NeighborIndex* index_;
    int k_;
};

/// Finitely supported measure: support points plus positive masses. When the
/// masses are rationals over a common denominator (uniform measures declare
/// N), the exact transport solver can use them; measures without a declared
/// denominator are rejected by that path.
struct DiscreteMeasure {
    PointCloud support;
    std::vector<double> masses;
    std::optional<int64_t> denominator;

    double total_mass() const;
    void validate() const;

    static DiscreteMeasure uniform_on(const PointCloud& cloud);
    static DiscreteMeasure dirac(std::span<const double> p);
};

/// Distance to a finitely supported measure at mass parameter m0: sort the
/// support by distance to x and average squared distances over the first m0
/// of mass; the marginal atom contributes only the fraction needed to reach
/// m0 exactly. This evaluates the integral definition exactly for atomic
/// measures.
double eval_dtm(const DiscreteMeasure& mu, double m0, std::span<const double> x);

/// Witnessed k-distance: the power distance over the N witnessed barycenters
/// (one per input point: the point itself plus its k-1 nearest neighbors
/// among the others; coincident duplicates counted with multiplicity).
class WitnessedKDistance {
public:
    WitnessedKDistance(const NeighborIndex& index, int k);

    double eval(std::span<const double> x) const { return sites_->eval(x); }
    const PowerDistance& sites() const { return *sites_; }
    int k() const { return k_; }
    int cloud_size() const { return n_; }
    double m0() const { return static_cast<double>(k_) / n_; }

private:
    std::unique_ptr<PowerDistance> sites_;
    int k_;
    int n_;
};

/// Builds the index internally; prefer the index overload when sweeping k.
WitnessedKDistance witnessed_sites(const PointCloud& cloud, int k);
WitnessedKDistance witnessed_sites(const NeighborIndex& index, int k);

/// Oracle: one weighted site for every k-subset of the cloud. The power
/// distance over this full barycenter set coincides exactly with the
/// k-distance. Guarded to C(N,k) <= 10^6.
PowerDistance brute_force_sites(const PointCloud& cloud, int k);

/// C(n,k) with saturation just above the brute-force guard.
int64_t binomial_guarded(int n, int k);

}  // namespace wkd
