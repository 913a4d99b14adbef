#pragma once

#include <Eigen/Core>

#include "esmg/error.hpp"

namespace esmg {

inline constexpr double kEarthRadiusM = 6.371e6;
inline constexpr double kGravityMps2 = 9.80665;
inline constexpr double kEarthOmegaRps = 7.292e-5;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double deg) { return deg * (kPi / 180.0); }
inline double rad2deg(double rad) { return rad * (180.0 / kPi); }

/// Regular latitude-longitude sphere: cell-center latitudes strictly
/// increasing in [-90, 90], uniformly spaced longitudes in [0, 360).
/// Angles on the public surface are degrees; internal math uses radians.
class GridSpec {
 public:
  GridSpec(Eigen::ArrayXd lat_deg, Eigen::ArrayXd lon_deg, double radius_m = kEarthRadiusM);

  /// Equiangular cell-center grid: lat_j = -90 + (j + 1/2) * 180/nlat,
  /// lon_k = k * 360/nlon. This is also the grid convention assumed by the
  /// adapter wire protocol, which transmits only (nlat, nlon).
  static GridSpec regular(int nlat, int nlon, double radius_m = kEarthRadiusM);

  int nlat() const { return static_cast<int>(lat_deg_.size()); }
  int nlon() const { return static_cast<int>(lon_deg_.size()); }
  Eigen::Index ncell() const { return lat_deg_.size() * lon_deg_.size(); }

  const Eigen::ArrayXd& lat_deg() const { return lat_deg_; }
  const Eigen::ArrayXd& lon_deg() const { return lon_deg_; }
  double radius_m() const { return radius_m_; }

  Eigen::ArrayXd lat_rad() const { return lat_deg_ * (kPi / 180.0); }
  Eigen::ArrayXd lon_rad() const { return lon_deg_ * (kPi / 180.0); }

  /// Uniform longitude spacing in radians.
  double dlon_rad() const { return deg2rad(lon_deg_[1] - lon_deg_[0]); }

  /// Cell index helpers for flattened (lat, lon) row-major storage.
  Eigen::Index cell(Eigen::Index j, Eigen::Index k) const { return j * nlon() + k; }

  /// Nearest cell center to a (lat, lon) point in degrees.
  Eigen::Index nearest_cell(double lat, double lon) const;

  bool same_shape(const GridSpec& other) const {
    return nlat() == other.nlat() && nlon() == other.nlon();
  }

 private:
  Eigen::ArrayXd lat_deg_;
  Eigen::ArrayXd lon_deg_;
  double radius_m_;
};

/// Per-cell normalized area weights, length nlat*nlon, row-major (lat, lon):
/// w(j,k) = cos(lat_j) / (nlon * sum_j' cos(lat_j')). Sums to 1 within 1e-12.
Eigen::ArrayXd area_weights(const GridSpec& grid);

/// Haversine great-circle distance between two (lat, lon) points in degrees.
double great_circle_distance(double lat1_deg, double lon1_deg, double lat2_deg,
                             double lon2_deg, double radius_m = kEarthRadiusM);

}  // namespace esmg
