#pragma once

#include <string>
#include <vector>

#include "esmg/dataset.hpp"

namespace esmg {

/// One detected pressure minimum.
struct FeatureCandidate {
  Eigen::Index time = 0;
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double center_value = 0.0;   // Pa
  double contour_depth = 0.0;  // Pa of closed contour achieved within radius
  bool closed = false;
};

/// Strict 8-neighbor local minima of `msl_var`, per timestep. A candidate is
/// "closed" when the region below center+delta_p, grown from the center,
/// never escapes past max_radius_m; of several minima sharing one region
/// only the deepest survives.
std::vector<FeatureCandidate> detect_pressure_minima(const Dataset& ds,
                                                     const std::string& msl_var, double delta_p,
                                                     double max_radius_m);

/// Mean of `variable` in great-circle-distance bins around the given
/// centers, pooled over all centers. Empty bins are NaN.
std::vector<double> radial_composite(const Dataset& ds, const std::string& variable,
                                     const std::vector<FeatureCandidate>& centers, int n_bins,
                                     double max_radius_m);

}  // namespace esmg
