#include "esmg/idealized.hpp"

#include <cmath>

#include "esmg/stats.hpp"

namespace esmg {

namespace {

Dataset single_step_dataset(const GridSpec& grid) {
  Eigen::ArrayXd time(1);
  time[0] = 0.0;
  return Dataset(grid, time);
}

}  // namespace

IdealizedCase gen_solid_body_advection(const GridSpec& grid, double alpha_rad, double u0_mps,
                                       double bell_lat_deg, double bell_lon_deg,
                                       double bell_radius_m, double h0) {
  const double cell_m = grid.radius_m() * deg2rad(grid.lat_deg()[1] - grid.lat_deg()[0]);
  require(bell_radius_m >= cell_m, errc::config_error,
          "bell radius smaller than one grid cell");
  require(u0_mps > 0.0, errc::config_error, "u0 must be positive");

  IdealizedCase c;
  c.case_id = "advection_solid_body";
  c.tracer = "q";
  c.u0_mps = u0_mps;
  c.alpha_rad = alpha_rad;
  c.initial = single_step_dataset(grid);

  Field& q = c.initial.add_variable("q", "1", true, "tracer_mixing_ratio");
  Field& u = c.initial.add_variable("u", "m s-1", true, "eastward_wind");
  Field& v = c.initial.add_variable("v", "m s-1", true, "northward_wind");

  const Eigen::ArrayXd lat = grid.lat_rad();
  const Eigen::ArrayXd lon = grid.lon_rad();
  auto qs = q.latlon_slice(0);
  auto us = u.latlon_slice(0);
  auto vs = v.latlon_slice(0);
  for (int j = 0; j < grid.nlat(); ++j) {
    for (int k = 0; k < grid.nlon(); ++k) {
      const Eigen::Index i = grid.cell(j, k);
      us[i] = u0_mps * (std::cos(lat[j]) * std::cos(alpha_rad) +
                        std::sin(lat[j]) * std::cos(lon[k]) * std::sin(alpha_rad));
      vs[i] = -u0_mps * std::sin(lon[k]) * std::sin(alpha_rad);
      const double r = great_circle_distance(grid.lat_deg()[j], grid.lon_deg()[k], bell_lat_deg,
                                             bell_lon_deg, grid.radius_m());
      qs[i] = (r < bell_radius_m) ? 0.5 * h0 * (1.0 + std::cos(kPi * r / bell_radius_m)) : 0.0;
    }
  }
  c.initial.provenance.model_id = "case:advection_solid_body";
  c.initial.attrs["case_id"] = c.case_id;
  return c;
}

IdealizedCase gen_balanced_jet(const GridSpec& grid, double u_max_mps, double jet_center_deg,
                               double jet_width_deg, const JetPerturbation& perturb) {
  require(jet_width_deg > 0.0, errc::config_error, "jet width must be positive");

  IdealizedCase c;
  c.case_id = "balanced_jet";
  c.tracer = "h";
  c.initial = single_step_dataset(grid);

  Field& h = c.initial.add_variable("h", "m", true, "height");
  Field& u = c.initial.add_variable("u", "m s-1", true, "eastward_wind");
  Field& v = c.initial.add_variable("v", "m s-1", true, "northward_wind");

  const double phi_c = deg2rad(jet_center_deg);
  const double delta = deg2rad(jet_width_deg);
  const double a = grid.radius_m();
  auto wind = [&](double phi) {
    const double x = (phi - phi_c) / delta;
    return u_max_mps * std::exp(-x * x);
  };
  // g dh/dphi = -a (f u + u^2 tan(phi)/a)
  auto dh_dphi = [&](double phi) {
    const double uu = wind(phi);
    const double f = 2.0 * kEarthOmegaRps * std::sin(phi);
    return -a * (f * uu + uu * uu * std::tan(phi) / a) / kGravityMps2;
  };

  // Trapezoid from the south pole, subdivided so quadrature error is far
  // below the 0.1 m comparison tolerance.
  const Eigen::ArrayXd lat = grid.lat_rad();
  Eigen::ArrayXd hprof(grid.nlat());
  double phi_prev = -0.5 * kPi;
  double acc = 10000.0;
  for (int j = 0; j < grid.nlat(); ++j) {
    const double phi_next = lat[j];
    const int nsub = std::max(1, int(std::ceil((phi_next - phi_prev) / 5.0e-4)));
    const double step = (phi_next - phi_prev) / nsub;
    for (int s = 0; s < nsub; ++s) {
      const double p0 = phi_prev + s * step;
      const double p1 = phi_prev + (s + 1) * step;
      acc += 0.5 * step * (dh_dphi(p0) + dh_dphi(p1));
    }
    hprof[j] = acc;
    phi_prev = phi_next;
  }

  auto hs = h.latlon_slice(0);
  auto us = u.latlon_slice(0);
  auto vs = v.latlon_slice(0);
  for (int j = 0; j < grid.nlat(); ++j) {
    const double uu = wind(lat[j]);
    for (int k = 0; k < grid.nlon(); ++k) {
      const Eigen::Index i = grid.cell(j, k);
      us[i] = uu;
      vs[i] = 0.0;
      hs[i] = hprof[j];
    }
  }
  if (perturb.amplitude != 0.0) {
    for (int j = 0; j < grid.nlat(); ++j) {
      for (int k = 0; k < grid.nlon(); ++k) {
        const double d = great_circle_distance(grid.lat_deg()[j], grid.lon_deg()[k],
                                               perturb.lat_deg, perturb.lon_deg, a);
        hs[grid.cell(j, k)] +=
            perturb.amplitude * std::exp(-(d * d) / (perturb.width_m * perturb.width_m));
      }
    }
  }
  c.initial.provenance.model_id = "case:balanced_jet";
  c.initial.attrs["case_id"] = c.case_id;
  return c;
}

Dataset run_case(const IdealizedCase& c, ModelAdapter& adapter) {
  require(adapter.grid().same_shape(c.initial.grid()), errc::adapter_init_error,
          "adapter grid does not match the case grid");
  for (const auto& v : c.initial.variables()) {
    bool found = false;
    for (const auto& av : adapter.variables()) found = found || av.name == v.name();
    require(found, errc::adapter_init_error,
            "adapter does not advertise case variable '" + v.name() + "'");
  }
  require(c.duration_steps >= 0, errc::config_error, "negative duration");

  const double dt = adapter.dt_seconds();
  const int n = c.duration_steps;
  Eigen::ArrayXd time(n + 1);
  for (int t = 0; t <= n; ++t) time[t] = t * dt;
  Dataset traj(c.initial.grid(), time);
  traj.attrs = c.initial.attrs;
  traj.attrs["adapter"] = adapter.name();
  traj.provenance = c.initial.provenance;
  traj.provenance.model_id = adapter.name();

  // Frame layout follows the adapter's advertised order.
  StateFrame state;
  for (const auto& av : adapter.variables()) {
    require(c.initial.has(av.name), errc::adapter_init_error,
            "case does not provide variable '" + av.name + "' the adapter expects");
    const Field& f = c.initial[av.name];
    state.push_back(Eigen::ArrayXd(f.latlon_slice(0)));
    traj.add_variable(av.name, f.units(), true, f.standard_name());
  }

  auto record = [&](const StateFrame& frame, Eigen::Index t) {
    for (size_t v = 0; v < frame.size(); ++v) {
      traj[adapter.variables()[v].name].latlon_slice(t) = frame[v];
    }
  };
  record(state, 0);
  for (int t = 1; t <= n; ++t) {
    StateFrame next;
    try {
      next = adapter.step(state);
    } catch (const Error& e) {
      if (e.code() == errc::adapter_broken || e.code() == errc::io_error) {
        raise(errc::adapter_broken,
              std::string(e.what()) + " (run_case step " + std::to_string(t) + ")");
      }
      throw;
    }
    require(next.size() == state.size(), errc::adapter_broken, "adapter changed variable count");
    for (const auto& f : next) {
      require(!f.hasNaN(), errc::instability, "NaN in adapter output at step " + std::to_string(t));
    }
    record(next, t);
    state = std::move(next);
  }
  return traj;
}

Eigen::ArrayXd zonal_symmetry_error(const Dataset& trajectory, const std::string& variable) {
  const Field& f = trajectory[variable];
  require(f.has(Axis::time), errc::invalid_argument, "trajectory variable needs a time axis");
  const GridSpec& grid = trajectory.grid();
  const Eigen::ArrayXd w = area_weights(grid);
  const int nlat = grid.nlat(), nlon = grid.nlon();

  const auto first = f.latlon_slice(0);
  const double range = first.maxCoeff() - first.minCoeff();
  const double denom = (range == 0.0) ? 1.0 : range + 1e-30;

  const Eigen::Index nt = f.size(Axis::time);
  Eigen::ArrayXd out(nt);
  for (Eigen::Index t = 0; t < nt; ++t) {
    const auto slice = f.latlon_slice(t);
    const ZonalMean zm = zonal_mean_slice(slice, nlat, nlon);
    double acc = 0.0, c = 0.0;
    for (int j = 0; j < nlat; ++j) {
      for (int k = 0; k < nlon; ++k) {
        const Eigen::Index i = Eigen::Index(j) * nlon + k;
        const double d = slice[i] - zm.values[j];
        const double x = w[i] * d * d;
        const double tt = acc + x;
        if (std::abs(acc) >= std::abs(x)) c += (acc - tt) + x;
        else c += (x - tt) + acc;
        acc = tt;
      }
    }
    out[t] = std::sqrt(acc + c) / denom;
  }
  return out;
}

double wave_growth_rate(const Dataset& trajectory, const std::string& ps_var,
                        Eigen::Index window_first, Eigen::Index window_last) {
  const Field& ps = trajectory[ps_var];
  const Eigen::Index nt = ps.size(Axis::time);
  require(window_first >= 0 && window_last < nt && window_first < window_last,
          errc::invalid_argument, "fit window out of range");

  const GridSpec& grid = trajectory.grid();
  const ZonalMean zm0 = zonal_mean_slice(ps.latlon_slice(0), grid.nlat(), grid.nlon());

  const Eigen::Index n = window_last - window_first + 1;
  Eigen::ArrayXd lna(n), tdays(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index t = window_first + i;
    const auto slice = ps.latlon_slice(t);
    double amp = 0.0;
    for (int j = 0; j < grid.nlat(); ++j) {
      for (int k = 0; k < grid.nlon(); ++k) {
        amp = std::max(amp, std::abs(slice[Eigen::Index(j) * grid.nlon() + k] - zm0.values[j]));
      }
    }
    require(amp > 0.0, errc::degenerate_regression,
            "zero wave amplitude in fit window at step " + std::to_string(t));
    lna[i] = std::log(amp);
    tdays[i] = trajectory.time_s()[t] / 86400.0;
  }

  const double tbar = tdays.mean(), lbar = lna.mean();
  const Eigen::ArrayXd dt = tdays - tbar;
  const double sxx = (dt * dt).sum();
  require(sxx > 0.0, errc::degenerate_regression, "degenerate fit window");
  return (dt * (lna - lbar)).sum() / sxx;
}

ShapeError advection_shape_error(const Dataset& trajectory, const IdealizedCase& c) {
  require(c.case_id == "advection_solid_body", errc::invalid_argument,
          "shape error is defined for the advection case");
  const Field& q = trajectory[c.tracer];
  const Eigen::Index nt = q.size(Axis::time);
  require(nt >= 1, errc::insufficient_data, "empty trajectory");

  const double t_end = trajectory.time_s()[nt - 1];
  const double t_rev = 2.0 * kPi * trajectory.grid().radius_m() / c.u0_mps;
  const double dt = nt >= 2 ? trajectory.time_s()[1] - trajectory.time_s()[0] : t_rev;
  const double k_rev = std::round(t_end / t_rev);
  require(std::abs(t_end - k_rev * t_rev) <= 0.5 * dt, errc::config_error,
          "trajectory end time is not an integer number of revolutions");

  const Eigen::ArrayXd w = area_weights(trajectory.grid());
  const auto q0 = q.latlon_slice(0);
  const auto qe = q.latlon_slice(nt - 1);

  const double num = sum_compensated(((qe - q0).square() * w).matrix());
  const double den = sum_compensated((q0.square() * w).matrix());
  require(den > 0.0, errc::invalid_argument, "initial tracer is identically zero");

  ShapeError e;
  e.l2 = std::sqrt(num / den);
  e.overshoot = qe.maxCoeff() - q0.maxCoeff();
  e.undershoot = -qe.minCoeff();
  return e;
}

SolidBodyRotationAdapter::SolidBodyRotationAdapter(const IdealizedCase& c, double dt_s)
    : grid_(c.initial.grid()), dt_s_(dt_s), alpha_rad_(c.alpha_rad) {
  require(c.case_id == "advection_solid_body", errc::invalid_argument,
          "rotation adapter needs the advection case");
  require(dt_s_ > 0.0, errc::config_error, "dt must be positive");
  omega_rps_ = c.u0_mps / grid_.radius_m();
  for (const auto& v : c.initial.variables()) variables_.push_back({v.name(), v.units()});
  initial_tracer_ = c.initial[c.tracer].latlon_slice(0);
}

StateFrame SolidBodyRotationAdapter::step(const StateFrame& state) {
  require(state.size() == variables_.size(), errc::shape_mismatch, "wrong variable count");
  ++steps_done_;
  const double theta = omega_rps_ * dt_s_ * double(steps_done_);

  // Rotation axis of the solid-body flow in Cartesian coordinates.
  const double ax = -std::sin(alpha_rad_), az = std::cos(alpha_rad_);
  const int nlat = grid_.nlat(), nlon = grid_.nlon();
  const Eigen::ArrayXd lat = grid_.lat_rad();
  const Eigen::ArrayXd lon = grid_.lon_rad();

  Eigen::ArrayXd q(grid_.ncell());
  for (int j = 0; j < nlat; ++j) {
    for (int k = 0; k < nlon; ++k) {
      // Rotate the cell center backward by theta about the axis (Rodrigues),
      // then sample the initial tracer there. Axis is (ax, 0, az).
      const double cx = std::cos(lat[j]) * std::cos(lon[k]);
      const double cy = std::cos(lat[j]) * std::sin(lon[k]);
      const double cz = std::sin(lat[j]);
      const double ct = std::cos(-theta), st = std::sin(-theta);
      const double adot = ax * cx + az * cz;
      const double rx = cx * ct + (-az * cy) * st + ax * adot * (1 - ct);
      const double ry = cy * ct + (az * cx - ax * cz) * st;
      const double rz = cz * ct + (ax * cy) * st + az * adot * (1 - ct);

      const double sphi = std::clamp(rz, -1.0, 1.0);
      const double phi = std::asin(sphi);
      double lam = std::atan2(ry, rx);
      if (lam < 0) lam += 2.0 * kPi;

      // Bilinear interpolation on the source grid, periodic in longitude,
      // clamped at the polar rows.
      const double dlon = grid_.dlon_rad();
      const double fk = (lam - lon[0]) / dlon;
      int k0 = int(std::floor(fk));
      const double wk = fk - k0;
      k0 = ((k0 % nlon) + nlon) % nlon;
      const int k1 = (k0 + 1) % nlon;

      const double dlat = lat[1] - lat[0];
      double fj = (phi - lat[0]) / dlat;
      fj = std::clamp(fj, 0.0, double(nlat - 1));
      const int j0 = std::min(nlat - 2, int(std::floor(fj)));
      const double wj = fj - j0;
      const int j1 = j0 + 1;

      auto src = [&](int jj, int kk) { return initial_tracer_[Eigen::Index(jj) * nlon + kk]; };
      q[Eigen::Index(j) * nlon + k] = (1 - wj) * ((1 - wk) * src(j0, k0) + wk * src(j0, k1)) +
                                      wj * ((1 - wk) * src(j1, k0) + wk * src(j1, k1));
    }
  }

  StateFrame next = state;
  next[0] = std::move(q);
  return next;
}

}  // namespace esmg
