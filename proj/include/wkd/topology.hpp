#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wkd/field.hpp"
#include "wkd/kdtree.hpp"

namespace wkd {

struct PersistencePair {
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    int dim = 0;
    // Flat grid indices of the creator/destroyer cells; -1 for the essential
    // class. Lets tests track pairs across order-preserving perturbations.
    int birth_cell = -1;
    int death_cell = -1;

    double persistence() const { return death - birth; }
    bool essential() const { return std::isinf(death); }
};

struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;

    std::vector<PersistencePair> in_dim(int dim) const;
    // Persistences of finite pairs in one dimension, sorted descending.
    std::vector<double> persistences(int dim) const;
};

/// Betti numbers of the r-sublevel set under the (4, 8) digital adjacency
/// pairing: beta0 counts 4-connected foreground components, beta1 counts
/// 8-connected background components that do not touch the grid boundary.
std::pair<int, int> betti_at_level(const ScalarField2D& field, double r);

/// Sublevel-set persistence of the sampled function.
///
/// Dim 0 pairs come from union-find over pixels in increasing (value, index)
/// order with 4-adjacency (elder rule; the younger component dies at the
/// merge value). Dim 1 pairs come from Alexander duality: the same union-find
/// on the negated field with 8-adjacency and a virtual boundary node, with
/// each superlevel dim-0 pair (b', d') mapped to the sublevel dim-1 pair
/// (-d', -b'). Values are reported exactly as sampled; zero-length pairs are
/// dropped. A class present at level r satisfies birth <= r < death.
PersistenceDiagram sublevel_persistence(const ScalarField2D& field);

/// Count of classes with birth <= a and death > b in the given dimension.
int persistent_betti(const PersistenceDiagram& diag, double a, double b, int dim);

struct VineyardEntry {
    int k = 0;
    double m0 = 0.0;
    PersistenceDiagram diagram;  // dim-1 pairs only
};

struct Vineyard {
    std::vector<VineyardEntry> entries;
};

/// For each k (strictly increasing): witnessed k-distance, rasterized over
/// the given grid, dim-1 persistence. Entries are independent diagrams; no
/// cross-k class matching is attempted.
Vineyard vineyard_sweep(const PointCloud& cloud, const std::vector<int>& k_values,
                        BoundingBox2D box, int nx, int ny);

std::string diagram_to_csv(const PersistenceDiagram& diag);
PersistenceDiagram diagram_from_csv(const std::string& text);
std::string vineyard_to_csv(const Vineyard& vineyard);

}  // namespace wkd
