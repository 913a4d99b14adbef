#include "esmg/causality.hpp"

#include <cmath>
#include <cstring>

namespace esmg {

namespace {

StateFrame frame_from_dataset(const Dataset& ds, const std::vector<VariableInfo>& order) {
  StateFrame f;
  for (const auto& v : order) {
    require(ds.has(v.name), errc::adapter_init_error,
            "base state lacks adapter variable '" + v.name + "'");
    f.push_back(Eigen::ArrayXd(ds[v.name].latlon_slice(0)));
  }
  return f;
}

bool frames_bitwise_equal(const StateFrame& a, const StateFrame& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    if (std::memcmp(a[i].data(), b[i].data(), size_t(a[i].size()) * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace

CausalityReport causality_test(const AdapterFactory& factory, const Dataset& base_state,
                               double lat_deg, double lon_deg, double amplitude,
                               const std::string& variable, double c_bound_mps, int n_steps,
                               double eps_rel) {
  require(c_bound_mps > 0.0, errc::config_error, "c_bound must be positive");
  require(n_steps >= 1, errc::config_error, "need at least one step");
  require(!(amplitude == 0.0 && eps_rel > 0.0), errc::config_error,
          "degenerate test: zero amplitude cannot exceed a relative threshold");

  auto control = factory();
  auto perturbed = factory();
  require(control && perturbed, errc::adapter_init_error, "factory returned no adapter");
  require(control->deterministic(), errc::adapter_init_error,
          "causality test needs a deterministic adapter");
  require(control->grid().same_shape(base_state.grid()), errc::adapter_init_error,
          "adapter grid does not match base state");

  const GridSpec& grid = base_state.grid();
  const std::vector<VariableInfo>& vars = control->variables();
  const StateFrame base = frame_from_dataset(base_state, vars);

  // Determinism pre-check: one step, twice, must repeat bitwise.
  {
    auto probe = factory();
    const StateFrame s1 = probe->step(base);
    const StateFrame s2 = factory()->step(base);
    require(frames_bitwise_equal(s1, s2), errc::adapter_init_error,
            "adapter failed the determinism pre-check (repeated step differs)");
  }

  // Perturb exactly one cell of the named variable.
  size_t var_idx = vars.size();
  for (size_t v = 0; v < vars.size(); ++v) {
    if (vars[v].name == variable) var_idx = v;
  }
  require(var_idx < vars.size(), errc::missing_variable,
          "adapter does not advertise variable '" + variable + "'");
  const Eigen::Index cell = grid.nearest_cell(lat_deg, lon_deg);
  const Eigen::Index jc = cell / grid.nlon(), kc = cell % grid.nlon();

  StateFrame perturbed_state = base;
  perturbed_state[var_idx][cell] += amplitude;

  CausalityReport rep;
  rep.lat_deg = grid.lat_deg()[jc];
  rep.lon_deg = grid.lon_deg()[kc];
  rep.variable = variable;
  rep.amplitude = amplitude;
  rep.eps_rel = eps_rel;
  rep.c_bound_mps = c_bound_mps;
  rep.dt_s = control->dt_seconds();

  const Eigen::ArrayXd lat = grid.lat_rad();
  const double dlat = lat[1] - lat[0];
  const double dx = grid.radius_m() * grid.dlon_rad() * std::cos(lat[jc]);
  const double dy = grid.radius_m() * dlat;
  rep.d_cell_m = std::hypot(dx, dy);

  // Precompute distances from the perturbation point.
  Eigen::ArrayXd dist(grid.ncell());
  for (int j = 0; j < grid.nlat(); ++j) {
    for (int k = 0; k < grid.nlon(); ++k) {
      dist[grid.cell(j, k)] = great_circle_distance(rep.lat_deg, rep.lon_deg, grid.lat_deg()[j],
                                                    grid.lon_deg()[k], grid.radius_m());
    }
  }

  const double threshold = eps_rel * std::abs(amplitude);
  auto front_radius = [&](const StateFrame& a, const StateFrame& b) {
    double r = 0.0;
    for (size_t v = 0; v < a.size(); ++v) {
      for (Eigen::Index i = 0; i < a[v].size(); ++i) {
        if (std::abs(a[v][i] - b[v][i]) > threshold) r = std::max(r, dist[i]);
      }
    }
    return r;
  };

  StateFrame c_state = base;
  StateFrame p_state = perturbed_state;
  rep.front_radius_m.push_back(0.0);  // only the perturbed cell differs at t=0
  rep.bound_radius_m.push_back(rep.d_cell_m);
  rep.passed = true;
  rep.speed_estimate_mps = 0.0;
  for (int t = 1; t <= n_steps; ++t) {
    c_state = control->step(c_state);
    p_state = perturbed->step(p_state);
    const double r = front_radius(c_state, p_state);
    const double b = c_bound_mps * double(t) * rep.dt_s + rep.d_cell_m;
    rep.front_radius_m.push_back(r);
    rep.bound_radius_m.push_back(b);
    if (r > b) rep.passed = false;
    rep.speed_estimate_mps = std::max(rep.speed_estimate_mps, r / (double(t) * rep.dt_s));
  }
  return rep;
}

}  // namespace esmg
