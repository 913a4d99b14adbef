#include "esmg/stats.hpp"

#include <cmath>
#include <limits>

namespace esmg {

WeightedMean weighted_mean_masked(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                  const Eigen::Ref<const Eigen::ArrayXd>& weights) {
  require(values.size() == weights.size(), errc::shape_mismatch,
          "values/weights size mismatch");
  double num = 0.0, num_c = 0.0;
  double den = 0.0, den_c = 0.0;
  Eigen::Index n_valid = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double v = values[i];
    if (std::isnan(v)) continue;
    const double w = weights[i];
    ++n_valid;

    double x = w * v;
    double t = num + x;
    if (std::abs(num) >= std::abs(x)) num_c += (num - t) + x;
    else num_c += (x - t) + num;
    num = t;

    x = w;
    t = den + x;
    if (std::abs(den) >= std::abs(x)) den_c += (den - t) + x;
    else den_c += (x - t) + den;
    den = t;
  }
  WeightedMean out;
  out.n_valid = n_valid;
  out.weight_sum = den + den_c;
  out.mean = (n_valid > 0) ? (num + num_c) / out.weight_sum : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double global_mean(const Eigen::Ref<const Eigen::ArrayXd>& slice,
                   const Eigen::Ref<const Eigen::ArrayXd>& weights) {
  const WeightedMean wm = weighted_mean_masked(slice, weights);
  require(wm.n_valid > 0, errc::undefined_mean, "all cells masked in global mean");
  return wm.mean;
}

Eigen::ArrayXd global_mean_series(const Field& field, const GridSpec& grid) {
  require(field.has(Axis::lat) && field.has(Axis::lon), errc::invalid_argument,
          "global mean needs lat/lon dims on '" + field.name() + "'");
  require(!field.has(Axis::level), errc::invalid_argument,
          "global_mean_series does not map over levels ('" + field.name() + "')");
  const Eigen::ArrayXd w = area_weights(grid);
  const Eigen::Index nt = field.size(Axis::time);
  Eigen::ArrayXd out(nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    out[t] = global_mean(field.latlon_slice(t), w);
  }
  return out;
}

ZonalMean zonal_mean_slice(const Eigen::Ref<const Eigen::ArrayXd>& slice, int nlat, int nlon) {
  require(slice.size() == static_cast<Eigen::Index>(nlat) * nlon, errc::shape_mismatch,
          "slice size does not match grid");
  ZonalMean out;
  out.values.resize(nlat);
  for (int j = 0; j < nlat; ++j) {
    double sum = 0.0, c = 0.0;
    int n = 0;
    for (int k = 0; k < nlon; ++k) {
      const double v = slice[static_cast<Eigen::Index>(j) * nlon + k];
      if (std::isnan(v)) continue;
      const double t = sum + v;
      if (std::abs(sum) >= std::abs(v)) c += (sum - t) + v;
      else c += (v - t) + sum;
      sum = t;
      ++n;
    }
    if (n == 0) {
      out.values[j] = std::numeric_limits<double>::quiet_NaN();
      out.masked_rows.push_back(j);
    } else {
      out.values[j] = (sum + c) / n;
    }
  }
  return out;
}

ZonalMeanField zonal_mean(const Field& field, const GridSpec& grid) {
  require(field.has(Axis::lon), errc::invalid_argument,
          "zonal mean needs a lon dim on '" + field.name() + "'");
  require(field.has(Axis::lat), errc::invalid_argument,
          "zonal mean needs a lat dim on '" + field.name() + "'");

  const Eigen::Index nt = field.size(Axis::time);
  const Eigen::Index nl = field.size(Axis::level);
  const int nlat = static_cast<int>(field.size(Axis::lat));
  const int nlon = static_cast<int>(field.size(Axis::lon));
  require(nlat == grid.nlat() && nlon == grid.nlon(), errc::shape_mismatch,
          "field does not match grid");

  std::vector<Axis> dims;
  std::vector<Eigen::Index> shape;
  if (field.has(Axis::time)) { dims.push_back(Axis::time); shape.push_back(nt); }
  if (field.has(Axis::level)) { dims.push_back(Axis::level); shape.push_back(nl); }
  dims.push_back(Axis::lat);
  shape.push_back(nlat);

  Eigen::ArrayXd data(nt * nl * nlat);
  bool warn = false;
  Eigen::Index off = 0;
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (Eigen::Index l = 0; l < nl; ++l) {
      const ZonalMean zm = zonal_mean_slice(field.latlon_slice(t, l), nlat, nlon);
      data.segment(off, nlat) = zm.values;
      warn = warn || !zm.masked_rows.empty();
      off += nlat;
    }
  }
  Field out(field.name(), std::move(dims), std::move(shape), std::move(data), field.units(),
            field.standard_name(), /*maskable=*/true);
  return {std::move(out), warn};
}

}  // namespace esmg
