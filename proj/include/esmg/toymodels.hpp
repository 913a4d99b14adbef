#pragma once

#include <string>

#include "esmg/adapter.hpp"
#include "esmg/dataset.hpp"

namespace esmg {

/// Built-in reference subjects. `upwind` is engineered to pass the
/// conservation, positivity and causality checks; `leaky` and `teleport`
/// each break exactly one property on top of it.
enum class ToyVariant { upwind, leaky, teleport };

ToyVariant toy_variant_from_name(const std::string& name);
const char* toy_variant_name(ToyVariant v);

struct ToyModelConfig {
  ToyVariant variant = ToyVariant::upwind;
  double cfl = 0.5;                  // target outflow fraction per step, in (0, 1]
  double leak_lambda = 0.0;          // leaky: q *= (1 - lambda) each step
  double smoothing_strength = 0.0;   // teleport: blend toward the global mean
  std::string tracer = "q";
};

/// First-order finite-volume donor-cell advection of q by cell-center winds
/// (u zonal, v meridional, m/s), periodic in longitude, zero flux through
/// the poles. Flux form: the area-weighted total is conserved to rounding;
/// under the CFL bound the update is a convex combination, so q stays
/// nonnegative. Requires uniform latitude spacing.
Eigen::ArrayXd upwind_advect(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& q,
                             const Eigen::Ref<const Eigen::ArrayXd>& u,
                             const Eigen::Ref<const Eigen::ArrayXd>& v, double dt_s);

/// Largest dt with per-cell outflow fraction <= cfl for these winds.
double stable_dt(const GridSpec& grid, const Eigen::Ref<const Eigen::ArrayXd>& u,
                 const Eigen::Ref<const Eigen::ArrayXd>& v, double cfl);

class ToyModel : public ModelAdapter {
 public:
  ToyModel(GridSpec grid, double dt_s, ToyModelConfig config);

  const std::string& name() const override { return name_; }
  const GridSpec& grid() const override { return grid_; }
  const std::vector<VariableInfo>& variables() const override { return variables_; }
  double dt_seconds() const override { return dt_s_; }
  bool deterministic() const override { return true; }

  StateFrame step(const StateFrame& state) override;

  const ToyModelConfig& config() const { return config_; }

 private:
  GridSpec grid_;
  double dt_s_;
  ToyModelConfig config_;
  std::string name_;
  std::vector<VariableInfo> variables_;
  Eigen::ArrayXd weights_;
};

}  // namespace esmg
