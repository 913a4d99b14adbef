#pragma once

#include <Eigen/Core>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "esmg/error.hpp"
#include "esmg/grid.hpp"

namespace esmg {

/// Axes a Field may carry, in canonical storage order.
enum class Axis { time, level, lat, lon };

const char* axis_name(Axis a);
Axis axis_from_name(const std::string& name);

/// Model/data lineage carried with every dataset.
struct Provenance {
  std::string model_id;
  std::string model_version;
  std::string description;
  std::string code_url;
  std::string training_data_description;
  std::string content_hash;  // hex SHA-256 of the container payload

  bool operator==(const Provenance&) const = default;
};

/// One named variable: dense 64-bit float array, row-major over an ordered
/// subset of (time, level, lat, lon). Masked cells carry NaN and are only
/// legal when `maskable` is set.
class Field {
 public:
  Field(std::string name, std::vector<Axis> dims, std::vector<Eigen::Index> shape,
        Eigen::ArrayXd data, std::string units, std::string standard_name = "",
        bool maskable = false);

  const std::string& name() const { return name_; }
  const std::vector<Axis>& dims() const { return dims_; }
  const std::vector<Eigen::Index>& shape() const { return shape_; }
  const std::string& units() const { return units_; }
  const std::string& standard_name() const { return standard_name_; }
  bool maskable() const { return maskable_; }

  const Eigen::ArrayXd& data() const { return data_; }
  Eigen::ArrayXd& data() { return data_; }

  bool has(Axis a) const;
  /// Size along an axis; 1 when the axis is absent.
  Eigen::Index size(Axis a) const;

  /// Contiguous (lat, lon) slice at a given time/level index (0 for absent
  /// axes). Valid because lat/lon are always the trailing dims.
  Eigen::Map<const Eigen::ArrayXd> latlon_slice(Eigen::Index t = 0, Eigen::Index l = 0) const;
  Eigen::Map<Eigen::ArrayXd> latlon_slice(Eigen::Index t = 0, Eigen::Index l = 0);

  double at(Eigen::Index t, Eigen::Index l, Eigen::Index j, Eigen::Index k) const;
  double& at(Eigen::Index t, Eigen::Index l, Eigen::Index j, Eigen::Index k);

 private:
  Eigen::Index flat_index(Eigen::Index t, Eigen::Index l, Eigen::Index j, Eigen::Index k) const;

  std::string name_;
  std::vector<Axis> dims_;
  std::vector<Eigen::Index> shape_;
  Eigen::ArrayXd data_;
  std::string units_;
  std::string standard_name_;
  bool maskable_ = false;
};

/// A gridded dataset: coordinate axes, variables in declared order,
/// free-form string attributes, and provenance.
class Dataset {
 public:
  Dataset(GridSpec grid, Eigen::ArrayXd time_s,
          std::optional<Eigen::ArrayXd> level_pa = std::nullopt);

  const GridSpec& grid() const { return grid_; }
  const Eigen::ArrayXd& time_s() const { return time_s_; }
  const std::optional<Eigen::ArrayXd>& level_pa() const { return level_pa_; }

  Eigen::Index ntime() const { return time_s_.size(); }
  Eigen::Index nlevel() const { return level_pa_ ? level_pa_->size() : 0; }

  /// Appends a variable; shape is validated against the dataset axes.
  void add(Field field);

  bool has(const std::string& name) const { return find(name) != nullptr; }
  const Field* find(const std::string& name) const;
  Field* find(const std::string& name);
  const Field& operator[](const std::string& name) const;
  Field& operator[](const std::string& name);

  const std::vector<Field>& variables() const { return variables_; }

  /// Convenience: build and add a (time, lat, lon) or (lat, lon) variable.
  Field& add_variable(const std::string& name, const std::string& units,
                      bool with_time = true, const std::string& standard_name = "",
                      bool maskable = false);

  std::map<std::string, std::string> attrs;
  Provenance provenance;

 private:
  GridSpec grid_;
  Eigen::ArrayXd time_s_;
  std::optional<Eigen::ArrayXd> level_pa_;
  std::vector<Field> variables_;
};

}  // namespace esmg
