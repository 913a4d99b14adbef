#include "esmg/sanity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "esmg/stats.hpp"

namespace esmg {

namespace {

/// Keeps the `limit` most severe offenders; `severity` orders descending.
class OffenderHeap {
 public:
  explicit OffenderHeap(size_t limit = 10) : limit_(limit) {}

  void push(const Offender& o, double severity) {
    items_.push_back({severity, o});
    std::push_heap(items_.begin(), items_.end(), greater());
    if (items_.size() > limit_) {
      std::pop_heap(items_.begin(), items_.end(), greater());
      items_.pop_back();
    }
  }

  std::vector<Offender> sorted_descending() {
    std::sort(items_.begin(), items_.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Offender> out;
    out.reserve(items_.size());
    for (const auto& [sev, o] : items_) out.push_back(o);
    return out;
  }

 private:
  static auto greater() {
    return [](const auto& a, const auto& b) { return a.first > b.first; };
  }
  size_t limit_;
  std::vector<std::pair<double, Offender>> items_;
};

double weighted_sum_masked(const Eigen::Ref<const Eigen::ArrayXd>& values,
                           const Eigen::Ref<const Eigen::ArrayXd>& weights) {
  double s = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    const double x = weights[i] * values[i];
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
    else c += (x - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace

CheckResult check_mass_conservation(const Dataset& ds, double tolerance_rel,
                                    const std::string& mass_var) {
  const Field* ps = ds.find(mass_var);
  require(ps != nullptr, errc::missing_variable,
          "mass check needs variable '" + mass_var + "'");
  require(ps->has(Axis::time) && ps->size(Axis::time) >= 2, errc::insufficient_data,
          "mass check needs at least 2 timesteps");
  require(!ps->has(Axis::level), errc::invalid_argument,
          "mass variable must be 2D (time, lat, lon)");

  const Field* tcwv = ds.find("tcwv");
  const bool dry = (tcwv != nullptr && mass_var == "ps");
  const Eigen::ArrayXd w = area_weights(ds.grid());
  const Eigen::Index nt = ps->size(Axis::time);

  Eigen::ArrayXd mass(nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    double m = weighted_sum_masked(ps->latlon_slice(t), w);
    if (mass_var == "ps") m /= kGravityMps2;
    if (dry) m -= weighted_sum_masked(tcwv->latlon_slice(t), w);
    mass[t] = m;
  }

  CheckResult res;
  res.check_id = "mass_conservation";
  res.threshold = tolerance_rel;
  require(mass[0] != 0.0, errc::insufficient_data, "initial mass is zero; drift undefined");

  OffenderHeap heap;
  double worst = 0.0;
  for (Eigen::Index t = 0; t < nt; ++t) {
    const double drift = std::abs(mass[t] - mass[0]) / std::abs(mass[0]);
    worst = std::max(worst, drift);
    if (t > 0) heap.push({t, -1, -1, -1, drift}, drift);
  }
  res.statistic = worst;
  res.passed = worst <= tolerance_rel;
  res.worst_offenders = heap.sorted_descending();
  res.notes = dry ? "dry-air variant (tcwv subtracted)" : "total-mass variant";
  return res;
}

CheckResult check_nonnegative_tracers(const Dataset& ds, const std::vector<std::string>& tracers,
                                      double floor) {
  require(!tracers.empty(), errc::invalid_argument, "no tracer names given");

  CheckResult res;
  res.check_id = "nonnegative_tracers";
  res.threshold = floor - kTracerFloorGrace;

  OffenderHeap heap;
  double min_val = std::numeric_limits<double>::infinity();
  std::string min_name;
  for (const auto& name : tracers) {
    const Field* f = ds.find(name);
    require(f != nullptr, errc::missing_variable, "unknown tracer '" + name + "'");
    const Eigen::Index nt = f->size(Axis::time);
    const Eigen::Index nl = f->size(Axis::level);
    const Eigen::Index nlat = f->size(Axis::lat);
    const Eigen::Index nlon = f->size(Axis::lon);
    for (Eigen::Index t = 0; t < nt; ++t) {
      for (Eigen::Index l = 0; l < nl; ++l) {
        const auto slice = f->latlon_slice(t, l);
        for (Eigen::Index i = 0; i < slice.size(); ++i) {
          const double v = slice[i];
          if (std::isnan(v)) continue;
          if (v < min_val) {
            min_val = v;
            min_name = name;
          }
          if (v < floor) heap.push({t, f->has(Axis::level) ? l : -1, i / nlon, i % nlon, v}, -v);
        }
      }
    }
  }
  require(std::isfinite(min_val), errc::insufficient_data, "all tracer cells masked");

  res.statistic = min_val;
  res.passed = min_val >= floor - kTracerFloorGrace;
  res.worst_offenders = heap.sorted_descending();
  res.notes = "most negative value in '" + min_name + "'";
  return res;
}

CheckResult check_precip_column_budget(const Dataset& ds, double dt_s, double tolerance) {
  const Field* pr = ds.find("pr");
  const Field* tcwv = ds.find("tcwv");
  require(pr != nullptr, errc::missing_variable, "budget check needs 'pr'");
  require(tcwv != nullptr, errc::missing_variable, "budget check needs 'tcwv'");
  require(dt_s > 0.0, errc::config_error, "dt must be positive");
  const Field* evap = ds.find("evap");

  CheckResult res;
  res.check_id = "precip_column_budget";
  res.threshold = tolerance;

  OffenderHeap heap;
  double worst = -std::numeric_limits<double>::infinity();
  const Eigen::Index nt = pr->size(Axis::time);
  const Eigen::Index nlon = pr->size(Axis::lon);
  for (Eigen::Index t = 0; t < nt; ++t) {
    const auto p = pr->latlon_slice(t);
    const auto wv = tcwv->latlon_slice(t);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (std::isnan(p[i]) || std::isnan(wv[i])) continue;
      double budget = wv[i];
      if (evap) budget += evap->latlon_slice(t)[i] * dt_s;
      const double v = p[i] * dt_s - budget;
      if (v > worst) worst = v;
      if (v > tolerance) heap.push({t, -1, i / nlon, i % nlon, v}, v);
    }
  }
  require(std::isfinite(worst), errc::insufficient_data, "no valid cells in budget check");

  res.statistic = worst;
  res.passed = worst <= tolerance;
  res.worst_offenders = heap.sorted_descending();
  res.notes = evap ? "evaporation included" : "evaporation absent, treated as 0 (strict)";
  return res;
}

double magnus_saturation_vapor_pressure(double temp_k) {
  return 610.94 * std::exp(17.625 * (temp_k - 273.15) / (temp_k - 30.11));
}

double vapor_pressure(double specific_humidity, double pressure_pa) {
  return specific_humidity * pressure_pa / (0.622 + 0.378 * specific_humidity);
}

double saturation_specific_humidity(double temp_k, double pressure_pa) {
  const double es = magnus_saturation_vapor_pressure(temp_k);
  return 0.622 * es / (pressure_pa - 0.378 * es);
}

double relative_humidity(double specific_humidity, double temp_k, double pressure_pa) {
  return vapor_pressure(specific_humidity, pressure_pa) /
         magnus_saturation_vapor_pressure(temp_k);
}

CheckResult check_supersaturation(const Dataset& ds, double rh_max, double band_min_pa,
                                  double max_exceed_frac) {
  const Field* ta = ds.find("ta");
  const Field* q = ds.find("q");
  require(ta != nullptr, errc::missing_variable, "supersaturation check needs 'ta'");
  require(q != nullptr, errc::missing_variable, "supersaturation check needs 'q'");
  require(ds.level_pa().has_value() && ta->has(Axis::level) && q->has(Axis::level),
          errc::config_error, "supersaturation check needs a pressure-level axis");

  std::vector<Eigen::Index> band;
  for (Eigen::Index l = 0; l < ds.nlevel(); ++l) {
    if ((*ds.level_pa())[l] >= band_min_pa) band.push_back(l);
  }
  require(!band.empty(), errc::config_error, "near-surface band selects no levels");

  CheckResult res;
  res.check_id = "supersaturation";
  res.threshold = max_exceed_frac;

  OffenderHeap heap;
  long long n_samples = 0, n_exceed = 0;
  const Eigen::Index nt = ta->size(Axis::time);
  const Eigen::Index nlon = ta->size(Axis::lon);
  for (Eigen::Index t = 0; t < nt; ++t) {
    for (const Eigen::Index l : band) {
      const double p = (*ds.level_pa())[l];
      const auto temp = ta->latlon_slice(t, l);
      const auto hum = q->latlon_slice(t, l);
      for (Eigen::Index i = 0; i < temp.size(); ++i) {
        if (std::isnan(temp[i]) || std::isnan(hum[i])) continue;
        ++n_samples;
        const double rh = relative_humidity(hum[i], temp[i], p);
        if (rh > rh_max) {
          ++n_exceed;
          heap.push({t, l, i / nlon, i % nlon, rh}, rh);
        }
      }
    }
  }
  require(n_samples > 0, errc::insufficient_data, "no valid cells in band");

  res.statistic = double(n_exceed) / double(n_samples);
  res.passed = res.statistic <= max_exceed_frac;
  res.worst_offenders = heap.sorted_descending();
  std::ostringstream note;
  note << n_exceed << " of " << n_samples << " cell-samples above RH " << rh_max;
  res.notes = note.str();
  return res;
}

}  // namespace esmg
