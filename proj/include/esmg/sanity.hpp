#pragma once

#include <string>
#include <vector>

#include "esmg/dataset.hpp"

namespace esmg {

/// Location of one offending sample; -1 marks an axis that does not apply.
struct Offender {
  Eigen::Index time = -1;
  Eigen::Index level = -1;
  Eigen::Index lat = -1;
  Eigen::Index lon = -1;
  double value = 0.0;
};

/// Verdict of one physical-consistency check, with quantitative evidence.
struct CheckResult {
  std::string check_id;
  bool passed = false;
  double statistic = 0.0;
  double threshold = 0.0;
  std::vector<Offender> worst_offenders;  // at most 10, most severe first
  std::string notes;
};

inline constexpr double kDefaultMassTolRel = 1e-6;
inline constexpr double kTracerFloorGrace = 1e-12;
inline constexpr double kDefaultPrecipBudgetTol = 1e-9;  // kg m^-2
inline constexpr double kDefaultRhMax = 1.01;
inline constexpr double kDefaultExceedFrac = 1e-4;
inline constexpr double kDefaultNearSurfaceMinPa = 85000.0;

/// Atmospheric-mass drift. M(t) = sum w*ps(t)/g; with total column water
/// vapor available the dry variant M(t) = sum w*(ps(t)/g - tcwv(t)) is
/// preferred. Statistic: max_t |M(t)-M(0)| / M(0).
CheckResult check_mass_conservation(const Dataset& ds, double tolerance_rel = kDefaultMassTolRel,
                                    const std::string& mass_var = "ps");

/// Statistic: most negative tracer value found; passes when
/// min >= floor - 1e-12 (numerical grace).
CheckResult check_nonnegative_tracers(const Dataset& ds, const std::vector<std::string>& tracers,
                                      double floor = 0.0);

/// Per cell and step, precipitated water pr*dt must not exceed the column
/// reservoir tcwv plus evaporation input. Statistic: max violation in
/// kg m^-2; evaporation is treated as zero when absent.
CheckResult check_precip_column_budget(const Dataset& ds, double dt_s,
                                       double tolerance = kDefaultPrecipBudgetTol);

/// Fraction of near-surface cell-samples with relative humidity above
/// rh_max. Near-surface band: pressure levels >= band_min_pa.
CheckResult check_supersaturation(const Dataset& ds, double rh_max = kDefaultRhMax,
                                  double band_min_pa = kDefaultNearSurfaceMinPa,
                                  double max_exceed_frac = kDefaultExceedFrac);

/// Magnus saturation vapor pressure over water, Pa. T in kelvin.
double magnus_saturation_vapor_pressure(double temp_k);
/// Vapor pressure from specific humidity (kg/kg) and pressure (Pa).
double vapor_pressure(double specific_humidity, double pressure_pa);
/// Specific humidity at saturation for the Magnus formula.
double saturation_specific_humidity(double temp_k, double pressure_pa);
/// Relative humidity e/e_s.
double relative_humidity(double specific_humidity, double temp_k, double pressure_pa);

}  // namespace esmg
