#include "esmg/toymodels.hpp"

#include <cmath>
#include <limits>

#include "esmg/stats.hpp"

namespace esmg {

ToyVariant toy_variant_from_name(const std::string& name) {
  if (name == "upwind") return ToyVariant::upwind;
  if (name == "leaky") return ToyVariant::leaky;
  if (name == "teleport") return ToyVariant::teleport;
  raise(errc::config_error, "unknown toy variant '" + name + "'");
}

const char* toy_variant_name(ToyVariant v) {
  switch (v) {
    case ToyVariant::upwind: return "upwind";
    case ToyVariant::leaky: return "leaky";
    case ToyVariant::teleport: return "teleport";
  }
  return "?";
}

namespace {

struct UpwindGeometry {
  int nlat, nlon;
  double dlat;                 // uniform latitude spacing, rad
  double dlon;                 // uniform longitude spacing, rad
  Eigen::ArrayXd cell_area;    // per row j: a^2 cos(lat_j) dlat dlon
  Eigen::ArrayXd north_len;    // per interface j+1/2: a cos(lat_{j+1/2}) dlon
  double east_len;             // a dlat
};

UpwindGeometry upwind_geometry(const GridSpec& grid) {
  UpwindGeometry g;
  g.nlat = grid.nlat();
  g.nlon = grid.nlon();
  const Eigen::ArrayXd lat = grid.lat_rad();
  g.dlat = lat[1] - lat[0];
  for (int j = 1; j < g.nlat; ++j) {
    require(std::abs((lat[j] - lat[j - 1]) - g.dlat) <= 1e-9 * g.dlat, errc::config_error,
            "toy models need uniform latitude spacing");
  }
  g.dlon = grid.dlon_rad();
  const double a = grid.radius_m();
  g.cell_area = a * a * lat.cos() * g.dlat * g.dlon;
  g.north_len.resize(g.nlat - 1);
  for (int j = 0; j + 1 < g.nlat; ++j) {
    g.north_len[j] = a * std::cos(0.5 * (lat[j] + lat[j + 1])) * g.dlon;
  }
  g.east_len = a * g.dlat;
  return g;
}

}  // namespace

double stable_dt(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& u,
                 const Eigen::Ref<const Eigen::ArrayXd>& v, double cfl) {
  require(cfl > 0.0 && cfl <= 1.0, errc::config_error, "cfl must be in (0, 1]");
  const UpwindGeometry g = upwind_geometry(grid);
  auto at = [&](const Eigen::Ref<const Eigen::ArrayXd>& f, int j, int k) {
    return f[Eigen::Index(j) * g.nlon + ((k % g.nlon) + g.nlon) % g.nlon];
  };

  double max_rate = 0.0;  // outflow per unit dt, as a fraction of cell content
  for (int j = 0; j < g.nlat; ++j) {
    for (int k = 0; k < g.nlon; ++k) {
      const double ue = 0.5 * (at(u, j, k) + at(u, j, k + 1));
      const double uw = 0.5 * (at(u, j, k - 1) + at(u, j, k));
      double out = std::max(ue, 0.0) * g.east_len + std::max(-uw, 0.0) * g.east_len;
      if (j + 1 < g.nlat) {
        const double vn = 0.5 * (at(v, j, k) + at(v, j + 1, k));
        out += std::max(vn, 0.0) * g.north_len[j];
      }
      if (j > 0) {
        const double vs = 0.5 * (at(v, j - 1, k) + at(v, j, k));
        out += std::max(-vs, 0.0) * g.north_len[j - 1];
      }
      max_rate = std::max(max_rate, out / g.cell_area[j]);
    }
  }
  if (max_rate == 0.0) return std::numeric_limits<double>::infinity();
  return cfl / max_rate;
}

Eigen::ArrayXd upwind_advect(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& q,
                             const Eigen::Ref<const Eigen::ArrayXd>& u,
                             const Eigen::Ref<const Eigen::ArrayXd>& v, double dt_s) {
  const UpwindGeometry g = upwind_geometry(grid);
  const Eigen::Index ncell = grid.ncell();
  require(q.size() == ncell && u.size() == ncell && v.size() == ncell, errc::shape_mismatch,
          "state arrays must match the grid");

  auto idx = [&](int j, int k) { return Eigen::Index(j) * g.nlon + ((k + g.nlon) % g.nlon); };

  // Donor-cell edge fluxes, each computed once so the flux-form update
  // telescopes exactly.
  Eigen::ArrayXd flux_e(ncell);               // through east edge of (j,k)
  Eigen::ArrayXd flux_n((g.nlat - 1) * Eigen::Index(g.nlon));  // through north edge of (j,k)
  for (int j = 0; j < g.nlat; ++j) {
    for (int k = 0; k < g.nlon; ++k) {
      const double ue = 0.5 * (u[idx(j, k)] + u[idx(j, k + 1)]);
      const double donor = ue >= 0.0 ? q[idx(j, k)] : q[idx(j, k + 1)];
      flux_e[idx(j, k)] = ue * g.east_len * donor;
    }
  }
  for (int j = 0; j + 1 < g.nlat; ++j) {
    for (int k = 0; k < g.nlon; ++k) {
      const double vn = 0.5 * (v[idx(j, k)] + v[idx(j + 1, k)]);
      const double donor = vn >= 0.0 ? q[idx(j, k)] : q[idx(j + 1, k)];
      flux_n[idx(j, k)] = vn * g.north_len[j] * donor;
    }
  }

  Eigen::ArrayXd next(ncell);
  for (int j = 0; j < g.nlat; ++j) {
    for (int k = 0; k < g.nlon; ++k) {
      double div = flux_e[idx(j, k)] - flux_e[idx(j, k - 1)];
      if (j + 1 < g.nlat) div += flux_n[idx(j, k)];
      if (j > 0) div -= flux_n[idx(j - 1, k)];
      next[idx(j, k)] = q[idx(j, k)] - dt_s * div / g.cell_area[j];
    }
  }
  return next;
}

ToyModel::ToyModel(GridSpec grid, double dt_s, ToyModelConfig config)
    : grid_(std::move(grid)), dt_s_(dt_s), config_(std::move(config)) {
  require(dt_s_ > 0.0, errc::config_error, "dt must be positive");
  require(config_.cfl > 0.0 && config_.cfl <= 1.0, errc::config_error, "cfl must be in (0, 1]");
  if (config_.variant == ToyVariant::leaky) {
    require(config_.leak_lambda >= 0.0 && config_.leak_lambda < 1.0, errc::config_error,
            "leak lambda must be in [0, 1)");
  }
  if (config_.variant == ToyVariant::teleport) {
    require(config_.smoothing_strength >= 0.0 && config_.smoothing_strength <= 1.0,
            errc::config_error, "smoothing strength must be in [0, 1]");
  }
  name_ = std::string("toy-") + toy_variant_name(config_.variant);
  variables_ = {{config_.tracer, "1"}, {"u", "m s-1"}, {"v", "m s-1"}};
  weights_ = area_weights(grid_);
  upwind_geometry(grid_);  // validates uniform spacing up front
}

StateFrame ToyModel::step(const StateFrame& state) {
  require(state.size() == variables_.size(), errc::shape_mismatch,
          "state frame has wrong variable count");
  for (const auto& f : state) {
    require(f.size() == grid_.ncell(), errc::shape_mismatch, "state array size mismatch");
  }
  const Eigen::ArrayXd& q = state[0];
  const Eigen::ArrayXd& u = state[1];
  const Eigen::ArrayXd& v = state[2];

  // The advertised dt must respect the stability bound for these winds.
  const double dt_max = stable_dt(grid_, u, v, 1.0);
  require(dt_s_ <= dt_max * (1.0 + 1e-12), errc::config_error,
          "CFL violation: dt exceeds the stable bound");

  Eigen::ArrayXd next = upwind_advect(grid_, q, u, v, dt_s_);
  switch (config_.variant) {
    case ToyVariant::upwind:
      break;
    case ToyVariant::leaky:
      next *= (1.0 - config_.leak_lambda);
      break;
    case ToyVariant::teleport: {
      const double s = config_.smoothing_strength;
      const double mean = global_mean(next, weights_);
      next = (1.0 - s) * next + s * mean;
      break;
    }
  }
  return {std::move(next), u, v};
}

}  // namespace esmg
