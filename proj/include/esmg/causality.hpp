#pragma once

#include <string>
#include <vector>

#include "esmg/adapter.hpp"
#include "esmg/dataset.hpp"

namespace esmg {

inline constexpr double kAcousticSpeedMps = 340.0;
inline constexpr double kDefaultEpsRel = 1e-6;

/// Outcome of the information-propagation test: per step, the radius of the
/// perturbation footprint against the physical bound
/// b(t) = c_bound * t * dt + d_cell.
struct CausalityReport {
  double lat_deg = 0.0;  // perturbation cell center
  double lon_deg = 0.0;
  std::string variable;
  double amplitude = 0.0;
  double eps_rel = 0.0;
  double c_bound_mps = 0.0;
  double d_cell_m = 0.0;  // one grid-cell diagonal at the perturbation latitude
  double dt_s = 0.0;
  std::vector<double> front_radius_m;  // index = step, starting at 0
  std::vector<double> bound_radius_m;
  double speed_estimate_mps = 0.0;  // max over steps of r(t) / (t dt)
  bool passed = false;
};

/// Twin-trajectory test: run control and perturbed rollouts from the same
/// base state (variable bumped by `amplitude` at one cell) and track the
/// cells where any output differs by more than eps_rel * |amplitude|. The
/// factory must produce deterministic adapters; a control-vs-control
/// pre-check requiring a bitwise-equal repeated step enforces this.
CausalityReport causality_test(const AdapterFactory& factory, const Dataset& base_state,
                               double lat_deg, double lon_deg, double amplitude,
                               const std::string& variable, double c_bound_mps, int n_steps,
                               double eps_rel = kDefaultEpsRel);

}  // namespace esmg
