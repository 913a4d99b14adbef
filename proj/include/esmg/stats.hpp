#pragma once

#include <Eigen/Core>
#include <cmath>
#include <vector>

#include "esmg/dataset.hpp"
#include "esmg/error.hpp"
#include "esmg/grid.hpp"

namespace esmg {

/// Neumaier-compensated sum of a vector expression. Order-insensitive to
/// within one rounding of the exact sum, which keeps the conservation
/// statistics meaningful at the 1e-12 level.
template <class Derived>
double sum_compensated(const Eigen::DenseBase<Derived>& expr) {
  double s = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < expr.size(); ++i) {
    const double x = expr.derived().coeff(i);
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  return s + c;
}

/// Weighted mean over unmasked (non-NaN) entries, weights renormalized over
/// the valid subset.
struct WeightedMean {
  double mean = 0.0;
  double weight_sum = 0.0;
  Eigen::Index n_valid = 0;
};

WeightedMean weighted_mean_masked(const Eigen::Ref<const Eigen::ArrayXd>& values,
                                  const Eigen::Ref<const Eigen::ArrayXd>& weights);

/// Area-weighted global mean of one (lat, lon) slice. Throws undefined-mean
/// when every cell is masked.
double global_mean(const Eigen::Ref<const Eigen::ArrayXd>& slice,
                   const Eigen::Ref<const Eigen::ArrayXd>& weights);

/// Global mean of a (time?, lat, lon) field, one value per timestep.
Eigen::ArrayXd global_mean_series(const Field& field, const GridSpec& grid);

struct ZonalMean {
  Eigen::ArrayXd values;          // length nlat; NaN where a row is fully masked
  std::vector<int> masked_rows;   // indices of fully masked rows (warning flag)
};

/// Arithmetic mean over unmasked longitudes, one value per latitude row.
ZonalMean zonal_mean_slice(const Eigen::Ref<const Eigen::ArrayXd>& slice, int nlat, int nlon);

/// Field-level zonal mean: lon axis removed, other axes preserved.
struct ZonalMeanField {
  Field field;
  bool any_masked_row = false;
};
ZonalMeanField zonal_mean(const Field& field, const GridSpec& grid);

}  // namespace esmg
