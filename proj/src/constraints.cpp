#include "esmg/constraints.hpp"

#include <cmath>
#include <map>

#include "esmg/calendar.hpp"
#include "esmg/stats.hpp"

namespace esmg {

ScalingResult scaling_rate(const Eigen::Ref<const Eigen::ArrayXd>& x_series,
                           const Eigen::Ref<const Eigen::ArrayXd>& t_series) {
  require(x_series.size() == t_series.size(), errc::shape_mismatch,
          "series length mismatch");
  const Eigen::Index n = x_series.size();
  require(n >= 3, errc::insufficient_data, "scaling rate needs at least 3 samples");
  require((x_series > 0.0).all(), errc::domain_error,
          "scaling rate needs strictly positive x");

  const Eigen::ArrayXd lx = x_series.log();
  const double tbar = t_series.mean();
  const double lbar = lx.mean();
  const Eigen::ArrayXd dt = t_series - tbar;
  const double sxx = (dt * dt).sum();
  require(sxx > 0.0, errc::degenerate_regression, "temperature series has zero variance");

  const double slope = (dt * (lx - lbar)).sum() / sxx;
  const double intercept = lbar - slope * tbar;
  const Eigen::ArrayXd resid = lx - (intercept + slope * t_series);
  const double ssr = (resid * resid).sum();
  const double sigma2 = (n > 2) ? ssr / double(n - 2) : 0.0;

  ScalingResult out;
  out.rate_pct_per_k = 100.0 * slope;
  out.stderr_pct_per_k = 100.0 * std::sqrt(std::max(0.0, sigma2 / sxx));
  out.n_samples = n;
  return out;
}

ScalingResult with_band(ScalingResult r, double lo, double hi) {
  require(lo < hi, errc::config_error, "band must have lo < hi");
  r.band_lo = lo;
  r.band_hi = hi;
  r.has_band = true;
  r.passed = (r.rate_pct_per_k >= lo && r.rate_pct_per_k <= hi);
  return r;
}

namespace {

/// Mean of per-year means of the global-mean series.
Eigen::ArrayXd annual_global_means(const Dataset& ds, const std::string& variable) {
  const Eigen::ArrayXd series = global_mean_series(ds[variable], ds.grid());
  const std::vector<int> years = sample_years(ds);

  std::map<int, std::pair<double, int>> acc;  // year -> (sum, count)
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    auto& [sum, count] = acc[years[size_t(i)]];
    sum += series[i];
    count += 1;
  }
  Eigen::ArrayXd out(Eigen::Index(acc.size()));
  Eigen::Index i = 0;
  for (const auto& [year, sc] : acc) out[i++] = sc.first / sc.second;
  return out;
}

}  // namespace

ScalingResult check_scaling_constraint(const Dataset& ds, const std::string& variable,
                                       double band_lo, double band_hi) {
  require(ds.has(variable), errc::missing_variable,
          "constraint needs variable '" + variable + "'");
  require(ds.has("tas"), errc::missing_variable, "constraint needs variable 'tas'");

  const Eigen::ArrayXd x = annual_global_means(ds, variable);
  const Eigen::ArrayXd t = annual_global_means(ds, "tas");
  require(x.size() >= 3, errc::insufficient_data,
          "constraint needs at least 3 annual samples");
  return with_band(scaling_rate(x, t), band_lo, band_hi);
}

ScalingResult check_water_vapor_constraint(const Dataset& ds, double band_lo, double band_hi) {
  return check_scaling_constraint(ds, "tcwv", band_lo, band_hi);
}

ScalingResult check_precip_constraint(const Dataset& ds, double band_lo, double band_hi) {
  return check_scaling_constraint(ds, "pr", band_lo, band_hi);
}

}  // namespace esmg
