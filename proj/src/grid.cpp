#include "esmg/grid.hpp"

#include <cmath>
#include <string>

namespace esmg {

GridSpec::GridSpec(Eigen::ArrayXd lat_deg, Eigen::ArrayXd lon_deg, double radius_m)
    : lat_deg_(std::move(lat_deg)), lon_deg_(std::move(lon_deg)), radius_m_(radius_m) {
  require(lat_deg_.size() >= 2, errc::invalid_grid, "need at least 2 latitudes");
  require(lon_deg_.size() >= 4, errc::invalid_grid, "need at least 4 longitudes");
  require(radius_m_ > 0.0, errc::invalid_grid, "radius must be positive");

  for (Eigen::Index j = 0; j < lat_deg_.size(); ++j) {
    require(lat_deg_[j] >= -90.0 && lat_deg_[j] <= 90.0, errc::invalid_grid,
            "latitude out of [-90, 90]: " + std::to_string(lat_deg_[j]));
    if (j > 0) {
      require(lat_deg_[j] > lat_deg_[j - 1], errc::invalid_grid,
              "latitudes must be strictly increasing");
    }
  }

  const double dlon = lon_deg_[1] - lon_deg_[0];
  require(dlon > 0.0, errc::invalid_grid, "longitudes must be increasing");
  for (Eigen::Index k = 0; k < lon_deg_.size(); ++k) {
    require(lon_deg_[k] >= 0.0 && lon_deg_[k] < 360.0, errc::invalid_grid,
            "longitude out of [0, 360)");
    if (k > 0) {
      const double step = lon_deg_[k] - lon_deg_[k - 1];
      require(std::abs(step - dlon) <= 1e-12 * std::abs(dlon), errc::invalid_grid,
              "longitude spacing must be uniform");
    }
  }
}

GridSpec GridSpec::regular(int nlat, int nlon, double radius_m) {
  require(nlat >= 2 && nlon >= 4, errc::invalid_grid, "regular grid needs nlat>=2, nlon>=4");
  Eigen::ArrayXd lat(nlat), lon(nlon);
  const double dlat = 180.0 / nlat;
  for (int j = 0; j < nlat; ++j) lat[j] = -90.0 + (j + 0.5) * dlat;
  const double dlon = 360.0 / nlon;
  for (int k = 0; k < nlon; ++k) lon[k] = k * dlon;
  return GridSpec(std::move(lat), std::move(lon), radius_m);
}

Eigen::Index GridSpec::nearest_cell(double lat, double lon) const {
  lon = std::fmod(lon, 360.0);
  if (lon < 0.0) lon += 360.0;
  Eigen::Index jbest = 0, kbest = 0;
  (lat_deg_ - lat).abs().minCoeff(&jbest);
  // Longitude distance is periodic.
  double best = 1e300;
  for (Eigen::Index k = 0; k < lon_deg_.size(); ++k) {
    double d = std::abs(lon_deg_[k] - lon);
    d = std::min(d, 360.0 - d);
    if (d < best) {
      best = d;
      kbest = k;
    }
  }
  return cell(jbest, kbest);
}

Eigen::ArrayXd area_weights(const GridSpec& grid) {
  const Eigen::ArrayXd coslat = grid.lat_rad().cos();
  const double denom = grid.nlon() * coslat.sum();
  require(denom > 0.0, errc::invalid_grid, "degenerate grid: nonpositive weight sum");

  Eigen::ArrayXd w(grid.ncell());
  for (int j = 0; j < grid.nlat(); ++j) {
    w.segment(static_cast<Eigen::Index>(j) * grid.nlon(), grid.nlon()) = coslat[j] / denom;
  }
  return w;
}

double great_circle_distance(double lat1_deg, double lon1_deg, double lat2_deg,
                             double lon2_deg, double radius_m) {
  const double p1 = deg2rad(lat1_deg);
  const double p2 = deg2rad(lat2_deg);
  const double dp = p2 - p1;
  const double dl = deg2rad(lon2_deg - lon1_deg);

  const double sdp = std::sin(0.5 * dp);
  const double sdl = std::sin(0.5 * dl);
  const double h = sdp * sdp + std::cos(p1) * std::cos(p2) * sdl * sdl;
  return 2.0 * radius_m * std::asin(std::min(1.0, std::sqrt(h)));
}

}  // namespace esmg
