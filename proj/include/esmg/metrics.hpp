#pragma once

#include <optional>
#include <string>
#include <vector>

#include "esmg/calendar.hpp"
#include "esmg/dataset.hpp"

namespace esmg {

/// One scalar or vector diagnostic, keyed for intercomparison.
struct MetricRecord {
  std::string model_id;
  std::string variable;
  std::string season = "ANN";
  std::string region = "global";
  std::string metric_id;
  std::vector<double> value;  // size 1 for scalars
  std::string units;

  std::string key() const {
    return variable + "|" + season + "|" + region + "|" + metric_id;
  }
  bool operator==(const MetricRecord&) const = default;
};

/// Zonal power spectrum aggregated over a latitude band.
/// Parseval: sum_{m>=1} energy(m) equals the band's area-weighted zonal
/// variance.
struct SpectrumResult {
  std::vector<double> energy;  // index = zonal wavenumber m = 0..nlon/2
  double lat_min_deg = -90.0;
  double lat_max_deg = 90.0;
  std::string variable;
};

/// Season-mean field (time axis removed).
Field climatology(const Dataset& ds, const std::string& variable, Season season);

/// Area-weighted root-mean-square difference over the unmasked intersection.
double rmse(const Field& model, const Field& reference, const GridSpec& grid);

/// Median-normalized portrait values: n(m,e) = (R(m,e) - median_m) / median_m.
/// rmse_matrix is models x entries; NaN marks an absent cell and is passed
/// through. Columns need >= 2 present models and a nonzero median.
Eigen::MatrixXd portrait_normalize(const Eigen::MatrixXd& rmse_matrix,
                                   bool include_self_in_median = true);

/// Median with even-count midpoint averaging.
double median(std::vector<double> values);

/// Per-latitude discrete Fourier transform of the variable, energy
/// E_j(m) = (2 - [m in {0, nlon/2}]) |F_m|^2 / nlon^2, cos-weighted over the
/// band's latitudes and averaged over time.
SpectrumResult zonal_power_spectrum(const Dataset& ds, const std::string& variable,
                                    double lat_min_deg = -90.0, double lat_max_deg = 90.0);

/// First wavenumber m >= 1 from which E_model/E_ref stays below
/// ratio_threshold for all larger m; nullopt when the spectra never
/// separate.
std::optional<int> effective_resolution(const SpectrumResult& model, const SpectrumResult& ref,
                                        double ratio_threshold = 0.5);

/// Per-cell temporal Pearson correlation of two variables; zero-variance
/// cells come back masked (NaN).
Field covariance_map(const Dataset& ds, const std::string& var_a, const std::string& var_b);

/// Composite precipitation anomaly around each grid cell's hottest day of
/// the year: mean anomaly at lags -L..+L (relative to that year's cell
/// mean), area-weighted across cells and averaged over years. Daily data.
std::vector<double> hot_day_composite(const Dataset& ds, const std::string& temp_var,
                                      const std::string& precip_var, int lag_days);

}  // namespace esmg
