#pragma once

#include <Eigen/Core>
#include <string>

#include "esmg/dataset.hpp"

namespace esmg {

/// Percent-per-kelvin scaling of a global quantity against global
/// temperature, with the acceptance band it was tested against.
struct ScalingResult {
  double rate_pct_per_k = 0.0;
  double stderr_pct_per_k = 0.0;
  Eigen::Index n_samples = 0;
  double band_lo = 0.0;  // %/K
  double band_hi = 0.0;
  bool has_band = false;
  bool passed = false;
};

/// Ordinary least squares of ln(x) on t: rate = 100 * slope. x must be
/// strictly positive; at least 3 samples and nonzero temperature variance.
ScalingResult scaling_rate(const Eigen::Ref<const Eigen::ArrayXd>& x_series,
                           const Eigen::Ref<const Eigen::ArrayXd>& t_series);

ScalingResult with_band(ScalingResult r, double lo, double hi);

inline constexpr double kWaterVaporBandLo = 6.0;  // around the ~7 %/K scaling
inline constexpr double kWaterVaporBandHi = 8.0;
inline constexpr double kPrecipBandLo = 1.0;  // around the ~1-2 %/K scaling
inline constexpr double kPrecipBandHi = 2.0;

/// Annual-mean global means of `variable` regressed against annual-mean
/// global tas. Needs >= 3 annual samples.
ScalingResult check_scaling_constraint(const Dataset& ds, const std::string& variable,
                                       double band_lo, double band_hi);

/// Column water vapor against temperature, band (6, 8) %/K.
ScalingResult check_water_vapor_constraint(const Dataset& ds,
                                           double band_lo = kWaterVaporBandLo,
                                           double band_hi = kWaterVaporBandHi);

/// Precipitation against temperature, band (1, 2) %/K.
ScalingResult check_precip_constraint(const Dataset& ds, double band_lo = kPrecipBandLo,
                                      double band_hi = kPrecipBandHi);

}  // namespace esmg
