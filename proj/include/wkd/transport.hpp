#pragma once

#include <cstdint>
#include <vector>

#include "wkd/dtm.hpp"
#include "wkd/geometry.hpp"

namespace wkd {

/// Feasible transport plan between two discrete measures. Row sums equal the
/// source masses and column sums the target masses (to 1e-9); all entry
/// masses are positive.
struct TransportPlan {
    struct Entry {
        int src = 0;
        int tgt = 0;
        double mass = 0.0;
    };
    std::vector<Entry> entries;

    double squared_cost(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const;
};

struct W2Result {
    double distance = 0.0;
    TransportPlan plan;
};

/// Globally optimal squared-cost transport between two discrete measures of
/// equal total mass. Masses are scaled to integers through the measures'
/// declared denominators and the optimum is found by a transportation network
/// simplex; the result is exact (no entropic smoothing). Support sizes are
/// guarded at 4096 each.
W2Result w2_exact(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Exact optimal matching between two equal-size clouds carrying uniform
/// masses, via a shortest-augmenting-path assignment solver. Independent of
/// w2_exact; the two must agree on common inputs.
W2Result w2_assignment(const PointCloud& a, const PointCloud& b);

/// W2 between the uniform measure on P and a reference measure.
double w2_empirical_to_reference(const PointCloud& p, const DiscreteMeasure& ref);

}  // namespace wkd
