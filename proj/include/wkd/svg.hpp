#pragma once

#include <string>

#include "wkd/field.hpp"
#include "wkd/topology.hpp"

namespace wkd {

/// Thresholded field (cells with value <= level, gray) with the point cloud
/// overlaid in red; the figure-8 sublevel-set picture.
std::string svg_field_threshold(const ScalarField2D& field, double level,
                                const PointCloud* overlay);

/// Persistence of each dim-1 class versus m0, drawn as per-rank polylines;
/// the vineyard picture.
std::string svg_vineyard(const Vineyard& vineyard, int max_ranks = 12);

}  // namespace wkd
