#include "esmg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "esmg/stats.hpp"

namespace esmg {

Field climatology(const Dataset& ds, const std::string& variable, Season season) {
  const Field& f = ds[variable];
  require(f.has(Axis::time), errc::invalid_argument,
          "climatology needs a time axis on '" + variable + "'");

  const std::vector<Eigen::Index> samples = season_sample_indices(ds, season);
  require(!samples.empty(), errc::insufficient_data,
          std::string("season ") + season_name(season) + " has no samples");

  const Eigen::Index nl = f.size(Axis::level);
  const Eigen::Index ncell = f.size(Axis::lat) * f.size(Axis::lon);

  std::vector<Axis> dims;
  std::vector<Eigen::Index> shape;
  for (size_t i = 0; i < f.dims().size(); ++i) {
    if (f.dims()[i] == Axis::time) continue;
    dims.push_back(f.dims()[i]);
    shape.push_back(f.shape()[i]);
  }

  Eigen::ArrayXd data(nl * ncell);
  for (Eigen::Index l = 0; l < nl; ++l) {
    Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(ncell);
    Eigen::ArrayXi count = Eigen::ArrayXi::Zero(ncell);
    for (const Eigen::Index t : samples) {
      const auto slice = f.latlon_slice(t, l);
      for (Eigen::Index i = 0; i < ncell; ++i) {
        if (std::isnan(slice[i])) continue;
        sum[i] += slice[i];
        count[i] += 1;
      }
    }
    for (Eigen::Index i = 0; i < ncell; ++i) {
      data[l * ncell + i] =
          count[i] > 0 ? sum[i] / count[i] : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return Field(f.name(), std::move(dims), std::move(shape), std::move(data), f.units(),
               f.standard_name(), /*maskable=*/true);
}

double rmse(const Field& model, const Field& reference, const GridSpec& grid) {
  require(model.dims() == reference.dims() && model.shape() == reference.shape(),
          errc::shape_mismatch, "rmse operands must share dims and shape");
  require(model.size(Axis::lat) == grid.nlat() && model.size(Axis::lon) == grid.nlon(),
          errc::shape_mismatch, "rmse operands must match the grid");

  const Eigen::ArrayXd w = area_weights(grid);
  const Eigen::Index nt = model.size(Axis::time);
  const Eigen::Index nl = model.size(Axis::level);

  double num = 0.0, den = 0.0;
  Eigen::Index n_valid = 0;
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (Eigen::Index l = 0; l < nl; ++l) {
      const auto m = model.latlon_slice(t, l);
      const auto r = reference.latlon_slice(t, l);
      for (Eigen::Index i = 0; i < m.size(); ++i) {
        if (std::isnan(m[i]) || std::isnan(r[i])) continue;
        const double d = m[i] - r[i];
        num += w[i] * d * d;
        den += w[i];
        ++n_valid;
      }
    }
  }
  require(n_valid > 0, errc::undefined_mean, "rmse has empty unmasked intersection");
  return std::sqrt(num / den);
}

double median(std::vector<double> values) {
  require(!values.empty(), errc::invalid_argument, "median of empty set");
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Eigen::MatrixXd portrait_normalize(const Eigen::MatrixXd& rmse_matrix,
                                   bool include_self_in_median) {
  const Eigen::Index n_models = rmse_matrix.rows();
  const Eigen::Index n_entries = rmse_matrix.cols();
  Eigen::MatrixXd out(n_models, n_entries);
  out.setConstant(std::numeric_limits<double>::quiet_NaN());

  for (Eigen::Index e = 0; e < n_entries; ++e) {
    std::vector<double> col;
    for (Eigen::Index m = 0; m < n_models; ++m) {
      if (!std::isnan(rmse_matrix(m, e))) col.push_back(rmse_matrix(m, e));
    }
    require(col.size() >= 2, errc::invalid_argument,
            "portrait column " + std::to_string(e) + " has fewer than 2 models");

    for (Eigen::Index m = 0; m < n_models; ++m) {
      const double r = rmse_matrix(m, e);
      if (std::isnan(r)) continue;
      double med;
      if (include_self_in_median) {
        med = median(col);
      } else {
        std::vector<double> others;
        for (Eigen::Index mm = 0; mm < n_models; ++mm) {
          if (mm == m || std::isnan(rmse_matrix(mm, e))) continue;
          others.push_back(rmse_matrix(mm, e));
        }
        med = median(others);
      }
      require(med != 0.0, errc::undefined_normalization,
              "zero median in portrait column " + std::to_string(e));
      out(m, e) = (r - med) / med;
    }
  }
  return out;
}

SpectrumResult zonal_power_spectrum(const Dataset& ds, const std::string& variable,
                                    double lat_min_deg, double lat_max_deg) {
  const Field& f = ds[variable];
  require(f.has(Axis::lat) && f.has(Axis::lon), errc::invalid_argument,
          "spectrum needs lat/lon dims");
  require(!f.has(Axis::level), errc::invalid_argument,
          "spectrum expects a single-level variable; select the level first");
  require(!f.data().hasNaN(), errc::invalid_argument,
          "spectrum does not support masked fields");

  const GridSpec& grid = ds.grid();
  const int nlon = grid.nlon();
  const int n_wave = nlon / 2 + 1;

  std::vector<int> band;
  for (int j = 0; j < grid.nlat(); ++j) {
    const double lat = grid.lat_deg()[j];
    if (lat >= lat_min_deg && lat <= lat_max_deg) band.push_back(j);
  }
  require(!band.empty(), errc::invalid_argument, "latitude band selects no rows");

  // DFT as one complex matrix product over all (lat, time) columns.
  Eigen::MatrixXcd dft(n_wave, nlon);
  for (int m = 0; m < n_wave; ++m) {
    for (int k = 0; k < nlon; ++k) {
      const double ang = -2.0 * kPi * double(m) * double(k) / double(nlon);
      dft(m, k) = std::complex<double>(std::cos(ang), std::sin(ang));
    }
  }

  const Eigen::Index nt = f.size(Axis::time);
  Eigen::MatrixXd rows(nlon, band.size() * nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    const auto slice = f.latlon_slice(t);
    for (size_t b = 0; b < band.size(); ++b) {
      rows.col(Eigen::Index(t * Eigen::Index(band.size()) + Eigen::Index(b))) =
          slice.segment(Eigen::Index(band[b]) * nlon, nlon).matrix();
    }
  }
  const Eigen::MatrixXcd coeffs = dft * rows;

  const Eigen::ArrayXd coslat = grid.lat_rad().cos();
  double wsum = 0.0;
  for (const int j : band) wsum += coslat[j];
  require(wsum > 0.0, errc::invalid_argument, "band has zero total weight");

  SpectrumResult out;
  out.variable = variable;
  out.lat_min_deg = lat_min_deg;
  out.lat_max_deg = lat_max_deg;
  out.energy.assign(size_t(n_wave), 0.0);
  const double norm = 1.0 / (double(nlon) * double(nlon));
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (size_t b = 0; b < band.size(); ++b) {
      const Eigen::Index col = t * Eigen::Index(band.size()) + Eigen::Index(b);
      const double wj = coslat[band[b]] / wsum;
      for (int m = 0; m < n_wave; ++m) {
        const double factor = (m == 0 || 2 * m == nlon) ? 1.0 : 2.0;
        out.energy[size_t(m)] += wj * factor * std::norm(coeffs(m, col)) * norm / double(nt);
      }
    }
  }
  return out;
}

std::optional<int> effective_resolution(const SpectrumResult& model, const SpectrumResult& ref,
                                        double ratio_threshold) {
  require(model.energy.size() == ref.energy.size(), errc::shape_mismatch,
          "spectra have different wavenumber axes");
  const int n = int(model.energy.size());
  int first = -1;
  for (int m = 1; m < n; ++m) {
    require(ref.energy[size_t(m)] > 0.0, errc::invalid_argument,
            "reference spectrum must be positive above m=0");
    const double ratio = model.energy[size_t(m)] / ref.energy[size_t(m)];
    if (ratio < ratio_threshold) {
      if (first < 0) first = m;
    } else {
      first = -1;  // crossing not sustained
    }
  }
  if (first < 0) return std::nullopt;
  return first;
}

Field covariance_map(const Dataset& ds, const std::string& var_a, const std::string& var_b) {
  const Field& a = ds[var_a];
  const Field& b = ds[var_b];
  require(a.has(Axis::time) && b.has(Axis::time), errc::invalid_argument,
          "covariance needs time axes");
  require(!a.has(Axis::level) && !b.has(Axis::level), errc::invalid_argument,
          "covariance expects single-level variables");
  require(a.shape() == b.shape(), errc::shape_mismatch, "covariance operands differ in shape");
  const Eigen::Index nt = a.size(Axis::time);
  require(nt >= 3, errc::insufficient_data, "covariance needs at least 3 timesteps");

  const Eigen::Index ncell = a.size(Axis::lat) * a.size(Axis::lon);
  Eigen::ArrayXd r(ncell);
  for (Eigen::Index i = 0; i < ncell; ++i) {
    // Two-pass Pearson correlation over unmasked timesteps.
    double sa = 0.0, sb = 0.0;
    Eigen::Index n = 0;
    for (Eigen::Index t = 0; t < nt; ++t) {
      const double va = a.latlon_slice(t)[i], vb = b.latlon_slice(t)[i];
      if (std::isnan(va) || std::isnan(vb)) continue;
      sa += va;
      sb += vb;
      ++n;
    }
    if (n < 3) {
      r[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double ma = sa / double(n), mb = sb / double(n);
    double cab = 0.0, caa = 0.0, cbb = 0.0;
    for (Eigen::Index t = 0; t < nt; ++t) {
      const double va = a.latlon_slice(t)[i], vb = b.latlon_slice(t)[i];
      if (std::isnan(va) || std::isnan(vb)) continue;
      cab += (va - ma) * (vb - mb);
      caa += (va - ma) * (va - ma);
      cbb += (vb - mb) * (vb - mb);
    }
    if (caa == 0.0 || cbb == 0.0) {
      r[i] = std::numeric_limits<double>::quiet_NaN();
    } else {
      r[i] = std::clamp(cab / std::sqrt(caa * cbb), -1.0, 1.0);
    }
  }

  std::vector<Axis> dims{Axis::lat, Axis::lon};
  std::vector<Eigen::Index> shape{a.size(Axis::lat), a.size(Axis::lon)};
  return Field("corr_" + var_a + "_" + var_b, std::move(dims), std::move(shape), std::move(r),
               "1", "", /*maskable=*/true);
}

std::vector<double> hot_day_composite(const Dataset& ds, const std::string& temp_var,
                                      const std::string& precip_var, int lag_days) {
  require(lag_days >= 0, errc::invalid_argument, "lag must be nonnegative");
  const Field& temp = ds[temp_var];
  const Field& precip = ds[precip_var];
  require(temp.shape() == precip.shape(), errc::shape_mismatch,
          "temperature/precipitation shape mismatch");
  const Eigen::Index nt = temp.size(Axis::time);
  require(nt >= 2 * Eigen::Index(lag_days) + 1, errc::insufficient_data,
          "record shorter than the composite window");

  // Daily resolution required.
  for (Eigen::Index t = 1; t < nt; ++t) {
    const double dt = ds.time_s()[t] - ds.time_s()[t - 1];
    require(std::abs(dt - 86400.0) <= 1e-3, errc::invalid_argument,
            "hot-day composite needs daily timesteps");
  }
  const CalendarKind cal = calendar_from_attrs(ds);
  const int ylen = days_per_year(cal);
  require(nt >= ylen, errc::insufficient_data, "hot-day composite needs at least one full year");

  const std::vector<int> years = sample_years(ds);
  const int y0 = years.front();
  const int n_years = years.back() - y0 + 1;

  const Eigen::ArrayXd w = area_weights(ds.grid());
  const Eigen::Index ncell = temp.size(Axis::lat) * temp.size(Axis::lon);
  const int n_lags = 2 * lag_days + 1;
  std::vector<double> num(size_t(n_lags), 0.0), den(size_t(n_lags), 0.0);

  for (int y = 0; y < n_years; ++y) {
    // Contiguous index range of this year.
    Eigen::Index t_begin = -1, t_end = -1;
    for (Eigen::Index t = 0; t < nt; ++t) {
      if (years[size_t(t)] == y0 + y) {
        if (t_begin < 0) t_begin = t;
        t_end = t;
      }
    }
    if (t_begin < 0 || t_end - t_begin + 1 < ylen) continue;  // incomplete year

    for (Eigen::Index i = 0; i < ncell; ++i) {
      Eigen::Index hottest = -1;
      double tmax = -std::numeric_limits<double>::infinity();
      double psum = 0.0;
      Eigen::Index pcount = 0;
      for (Eigen::Index t = t_begin; t <= t_end; ++t) {
        const double tv = temp.latlon_slice(t)[i];
        const double pv = precip.latlon_slice(t)[i];
        if (!std::isnan(pv)) {
          psum += pv;
          ++pcount;
        }
        if (!std::isnan(tv) && tv > tmax) {
          tmax = tv;
          hottest = t;
        }
      }
      if (hottest < 0 || pcount == 0) continue;
      const double pmean = psum / double(pcount);

      for (int lag = -lag_days; lag <= lag_days; ++lag) {
        const Eigen::Index t = hottest + lag;
        if (t < 0 || t >= nt) continue;  // lag beyond the record: excluded
        const double pv = precip.latlon_slice(t)[i];
        if (std::isnan(pv)) continue;
        num[size_t(lag + lag_days)] += w[i] * (pv - pmean);
        den[size_t(lag + lag_days)] += w[i];
      }
    }
  }

  std::vector<double> out(size_t(n_lags), std::numeric_limits<double>::quiet_NaN());
  for (int k = 0; k < n_lags; ++k) {
    require(den[size_t(k)] > 0.0, errc::insufficient_data,
            "no samples at lag " + std::to_string(k - lag_days));
    out[size_t(k)] = num[size_t(k)] / den[size_t(k)];
  }
  return out;
}

}  // namespace esmg
