#include "esmg/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace esmg {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::time: return "time";
    case Axis::level: return "level";
    case Axis::lat: return "lat";
    case Axis::lon: return "lon";
  }
  return "?";
}

Axis axis_from_name(const std::string& name) {
  if (name == "time") return Axis::time;
  if (name == "level") return Axis::level;
  if (name == "lat") return Axis::lat;
  if (name == "lon") return Axis::lon;
  raise(errc::format_error, "unknown axis name '" + name + "'");
}

Field::Field(std::string name, std::vector<Axis> dims, std::vector<Eigen::Index> shape,
             Eigen::ArrayXd data, std::string units, std::string standard_name, bool maskable)
    : name_(std::move(name)),
      dims_(std::move(dims)),
      shape_(std::move(shape)),
      data_(std::move(data)),
      units_(std::move(units)),
      standard_name_(std::move(standard_name)),
      maskable_(maskable) {
  require(!name_.empty(), errc::invalid_argument, "field name must be nonempty");
  require(dims_.size() == shape_.size(), errc::shape_mismatch,
          "dims/shape rank mismatch for '" + name_ + "'");
  // Dims must appear in canonical (time, level, lat, lon) order, no repeats.
  for (size_t i = 1; i < dims_.size(); ++i) {
    require(static_cast<int>(dims_[i]) > static_cast<int>(dims_[i - 1]), errc::invalid_argument,
            "field dims must be an ordered subset of (time, level, lat, lon)");
  }
  Eigen::Index expect = 1;
  for (auto s : shape_) {
    require(s > 0, errc::shape_mismatch, "zero-size axis in '" + name_ + "'");
    expect *= s;
  }
  require(data_.size() == expect, errc::shape_mismatch,
          "data length does not match declared shape for '" + name_ + "'");
  if (!maskable_) {
    require(!data_.hasNaN(), errc::invalid_argument,
            "NaN in non-maskable variable '" + name_ + "'");
  }
}

bool Field::has(Axis a) const {
  return std::find(dims_.begin(), dims_.end(), a) != dims_.end();
}

Eigen::Index Field::size(Axis a) const {
  for (size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] == a) return shape_[i];
  }
  return 1;
}

Eigen::Index Field::flat_index(Eigen::Index t, Eigen::Index l, Eigen::Index j,
                               Eigen::Index k) const {
  Eigen::Index idx = 0;
  for (size_t i = 0; i < dims_.size(); ++i) {
    Eigen::Index c = 0;
    switch (dims_[i]) {
      case Axis::time: c = t; break;
      case Axis::level: c = l; break;
      case Axis::lat: c = j; break;
      case Axis::lon: c = k; break;
    }
    idx = idx * shape_[i] + c;
  }
  return idx;
}

Eigen::Map<const Eigen::ArrayXd> Field::latlon_slice(Eigen::Index t, Eigen::Index l) const {
  const Eigen::Index n = size(Axis::lat) * size(Axis::lon);
  const Eigen::Index off = flat_index(t, l, 0, 0);
  return {data_.data() + off, n};
}

Eigen::Map<Eigen::ArrayXd> Field::latlon_slice(Eigen::Index t, Eigen::Index l) {
  const Eigen::Index n = size(Axis::lat) * size(Axis::lon);
  const Eigen::Index off = flat_index(t, l, 0, 0);
  return {data_.data() + off, n};
}

double Field::at(Eigen::Index t, Eigen::Index l, Eigen::Index j, Eigen::Index k) const {
  return data_[flat_index(t, l, j, k)];
}

double& Field::at(Eigen::Index t, Eigen::Index l, Eigen::Index j, Eigen::Index k) {
  return data_[flat_index(t, l, j, k)];
}

Dataset::Dataset(GridSpec grid, Eigen::ArrayXd time_s, std::optional<Eigen::ArrayXd> level_pa)
    : grid_(std::move(grid)), time_s_(std::move(time_s)), level_pa_(std::move(level_pa)) {
  // Axis monotonicity is not enforced here; validate_metadata reports it as
  // a violation so broken files can be inspected instead of rejected.
  require(time_s_.size() >= 1, errc::invalid_argument, "time axis must be nonempty");
  if (level_pa_) {
    require(level_pa_->size() >= 1, errc::invalid_argument, "level axis must be nonempty");
  }
}

void Dataset::add(Field field) {
  require(!has(field.name()), errc::invalid_argument,
          "duplicate variable '" + field.name() + "'");
  for (size_t i = 0; i < field.dims().size(); ++i) {
    const Eigen::Index got = field.shape()[i];
    Eigen::Index want = 0;
    switch (field.dims()[i]) {
      case Axis::time: want = ntime(); break;
      case Axis::level:
        require(level_pa_.has_value(), errc::shape_mismatch,
                "variable '" + field.name() + "' declares a level axis but dataset has none");
        want = nlevel();
        break;
      case Axis::lat: want = grid_.nlat(); break;
      case Axis::lon: want = grid_.nlon(); break;
    }
    require(got == want, errc::shape_mismatch,
            "axis size mismatch for '" + field.name() + "'");
  }
  variables_.push_back(std::move(field));
}

const Field* Dataset::find(const std::string& name) const {
  for (const auto& v : variables_) {
    if (v.name() == name) return &v;
  }
  return nullptr;
}

Field* Dataset::find(const std::string& name) {
  for (auto& v : variables_) {
    if (v.name() == name) return &v;
  }
  return nullptr;
}

const Field& Dataset::operator[](const std::string& name) const {
  const Field* f = find(name);
  if (!f) raise(errc::missing_variable, "no variable '" + name + "' in dataset");
  return *f;
}

Field& Dataset::operator[](const std::string& name) {
  Field* f = find(name);
  if (!f) raise(errc::missing_variable, "no variable '" + name + "' in dataset");
  return *f;
}

Field& Dataset::add_variable(const std::string& name, const std::string& units, bool with_time,
                             const std::string& standard_name, bool maskable) {
  std::vector<Axis> dims;
  std::vector<Eigen::Index> shape;
  if (with_time) {
    dims.push_back(Axis::time);
    shape.push_back(ntime());
  }
  dims.push_back(Axis::lat);
  shape.push_back(grid_.nlat());
  dims.push_back(Axis::lon);
  shape.push_back(grid_.nlon());
  Eigen::Index n = 1;
  for (auto s : shape) n *= s;
  add(Field(name, std::move(dims), std::move(shape), Eigen::ArrayXd::Zero(n), units,
            standard_name, maskable));
  return *find(name);
}

}  // namespace esmg
