#pragma once

#include <string>
#include <vector>

#include "wkd/dtm.hpp"
#include "wkd/geometry.hpp"
#include "wkd/power.hpp"

namespace wkd {

/// Full double-precision decimal ("%.17g"); infinities render as "inf"/"-inf".
std::string fmt_double(double v);
double parse_double(const std::string& text);

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe partial output.
void atomic_write_text(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

// Point clouds: one point per line, comma-separated coordinates, optional
// '#' comment lines.
std::string point_cloud_to_csv(const PointCloud& cloud);
PointCloud point_cloud_from_csv(const std::string& text);
void write_point_cloud(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud(const std::string& path);

// Weighted sites: center coordinates plus a trailing weight column; the
// header comment records k, N and the construction mode.
std::string sites_to_csv(const PowerDistance& pd, int k, int n, const std::string& mode);
PowerDistance sites_from_csv(const std::string& text);

// Discrete measures: coordinates plus a trailing mass column; the header
// comment records the declared denominator when present.
std::string measure_to_csv(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_csv(const std::string& text);
void write_measure(const std::string& path, const DiscreteMeasure& mu);
DiscreteMeasure read_measure(const std::string& path);

}  // namespace wkd
