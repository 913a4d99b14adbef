#pragma once

#include <string>

#include "esmg/adapter.hpp"
#include "esmg/dataset.hpp"

namespace esmg {

/// A runnable idealized test: an initial state plus metadata a driver needs
/// to step it and judge the result.
struct IdealizedCase {
  std::string case_id;   // "advection_solid_body" | "balanced_jet"
  Dataset initial;       // single-timestep dataset holding the case variables
  std::string tracer;    // the variable the diagnostics watch ("q" or "h")
  double u0_mps = 0.0;   // solid-body speed (advection case)
  double alpha_rad = 0.0;
  double dt_s = 0.0;     // suggested step, 0 = pick from the adapter
  int duration_steps = 0;
};

/// Solid-body advection of a cosine bell:
///   u = u0 (cos(lat) cos(alpha) + sin(lat) cos(lon) sin(alpha))
///   v = -u0 sin(lon) sin(alpha)
///   q = (h0/2)(1 + cos(pi r / R)) inside great-circle radius R, else 0.
IdealizedCase gen_solid_body_advection(const GridSpec& grid, double alpha_rad, double u0_mps,
                                       double bell_lat_deg, double bell_lon_deg,
                                       double bell_radius_m, double h0);

struct JetPerturbation {
  double lat_deg = 40.0;
  double lon_deg = 180.0;
  double amplitude = 0.0;  // height units (m); 0 disables
  double width_m = 1.0e6;
};

/// Zonally uniform Gaussian jet u(lat) = u_max exp(-((lat-lat_c)/width)^2)
/// with height h integrated from gradient-wind balance
///   g dh/dlat = -a (f u + u^2 tan(lat)/a),  h(south pole) = 10000 m,
/// by trapezoid quadrature from the pole, plus an optional Gaussian bump
/// h' = A exp(-d^2/width^2) at a point.
IdealizedCase gen_balanced_jet(const GridSpec& grid, double u_max_mps, double jet_center_deg,
                               double jet_width_deg,
                               const JetPerturbation& perturb = JetPerturbation{});

/// Rolls the adapter out for case.duration_steps, recording every state
/// verbatim (initial state included). NaN in any output raises instability
/// with the step index.
Dataset run_case(const IdealizedCase& c, ModelAdapter& adapter);

/// Normalized deviation from zonal symmetry per recorded step:
/// S(t) = sqrt(sum w (f - zonal_mean f)^2) / (max f(0) - min f(0) + 1e-30).
/// A constant initial field falls back to an absolute (denominator 1) value.
Eigen::ArrayXd zonal_symmetry_error(const Dataset& trajectory, const std::string& variable);

/// Least-squares exponential growth rate (1/day) of the wave amplitude
/// A(t) = max |ps(t) - zonal_mean(ps(0))| over the fit window [first, last].
double wave_growth_rate(const Dataset& trajectory, const std::string& ps_var,
                        Eigen::Index window_first, Eigen::Index window_last);

struct ShapeError {
  double l2 = 0.0;
  double overshoot = 0.0;   // max(end) - max(initial)
  double undershoot = 0.0;  // -min(end)
};

/// Shape error after an integer number of solid-body revolutions, when the
/// exact solution equals the initial tracer.
ShapeError advection_shape_error(const Dataset& trajectory, const IdealizedCase& c);

/// Exact-solution adapter for the advection case: rotates the initial tracer
/// along the solid-body flow with bilinear interpolation. Serves as the
/// reference subject for shape-error tests.
class SolidBodyRotationAdapter : public ModelAdapter {
 public:
  SolidBodyRotationAdapter(const IdealizedCase& c, double dt_s);

  const std::string& name() const override { return name_; }
  const GridSpec& grid() const override { return grid_; }
  const std::vector<VariableInfo>& variables() const override { return variables_; }
  double dt_seconds() const override { return dt_s_; }
  bool deterministic() const override { return true; }

  StateFrame step(const StateFrame& state) override;

 private:
  std::string name_ = "exact-rotation";
  GridSpec grid_;
  std::vector<VariableInfo> variables_;
  double dt_s_;
  double omega_rps_;  // rotation rate u0/a
  double alpha_rad_;
  Eigen::ArrayXd initial_tracer_;
  long steps_done_ = 0;
};

}  // namespace esmg
