#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "esmg/grid.hpp"

namespace esmg {

struct VariableInfo {
  std::string name;
  std::string units;
};

/// One model state: per advertised variable, a flattened (lat, lon) array in
/// advertised order.
using StateFrame = std::vector<Eigen::ArrayXd>;

/// Black-box autoregressive stepping contract: the output of one iteration
/// is the input of the next. Instances are stateful and single-threaded;
/// run several instances for concurrency.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;

  virtual const std::string& name() const = 0;
  virtual const GridSpec& grid() const = 0;
  virtual const std::vector<VariableInfo>& variables() const = 0;
  virtual double dt_seconds() const = 0;
  virtual bool deterministic() const = 0;

  /// Advances one timestep. Output shape equals input shape.
  virtual StateFrame step(const StateFrame& state) = 0;
};

/// Produces fresh, independent adapter instances (twin-trajectory tests need
/// two of them).
using AdapterFactory = std::function<std::unique_ptr<ModelAdapter>()>;

}  // namespace esmg
