#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lagcalc {

/// Uniform axis with `count` nodes from `min` to `max` inclusive.
struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;

  double step() const noexcept { return (max - min) / static_cast<double>(count - 1); }
  double at(std::size_t i) const noexcept { return min + step() * static_cast<double>(i); }
  bool operator==(const Axis&) const = default;
};

/// Axis with `count` nodes of spacing h starting at -(count/2) h, so that the
/// origin is a node and differences of nodes are nodes (FFT-style layout).
Axis centered_axis(std::size_t count, double h);

/// Optional provenance of a field: group description and the frequency tau.
struct FieldContext {
  std::string group;
  std::vector<double> tau;
  bool operator==(const FieldContext&) const = default;
};

/// Complex samples on a uniform rectangular grid, row-major with the last axis
/// varying fastest.
class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<Axis> axes, std::vector<std::complex<double>> values,
               std::optional<FieldContext> context = std::nullopt);
  /// Zero field on the given grid.
  explicit SampledField(std::vector<Axis> axes);

  const std::vector<Axis>& axes() const noexcept { return axes_; }
  std::size_t dim() const noexcept { return axes_.size(); }
  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<std::complex<double>>& values() const noexcept { return values_; }
  std::vector<std::complex<double>>& values() noexcept { return values_; }
  const std::optional<FieldContext>& context() const noexcept { return context_; }
  void set_context(std::optional<FieldContext> c) { context_ = std::move(c); }

  std::complex<double>& operator[](std::size_t flat) { return values_[flat]; }
  const std::complex<double>& operator[](std::size_t flat) const { return values_[flat]; }

  /// Per-axis node indices of a flat index.
  std::vector<std::size_t> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::vector<std::size_t>& idx) const;
  /// Coordinates of node `flat`.
  Eigen::VectorXd point(std::size_t flat) const;
  /// Product of axis steps.
  double cell_volume() const noexcept;
  bool same_grid(const SampledField& other) const noexcept { return axes_ == other.axes_; }

  /// Tensor-product cubic (Catmull-Rom) interpolation; zero outside the grid.
  std::complex<double> interpolate(const Eigen::VectorXd& x) const;

  /// Trapezoid-rule integrals of |f| and |f|^2, and max |f|.
  double l1_norm() const;
  double l2_norm() const;
  double max_abs() const;

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> strides_;
  std::vector<std::complex<double>> values_;
  std::optional<FieldContext> context_;
};

using PointFunction = std::function<std::complex<double>(const Eigen::VectorXd&)>;

/// Samples f on the grid (in parallel; each node is written once).
SampledField sample_field(const std::vector<Axis>& axes, const PointFunction& f);

/// Binary container: "LCFIELD1", uint64 axis count, per axis (float64 min,
/// float64 max, uint64 count), then interleaved float64 (re, im) values, all
/// little-endian. A JSON sidecar at path + ".json" records the axes and context.
void write_field(const std::string& path, const SampledField& f);
SampledField read_field(const std::string& path);

/// CSV with one row per node: coordinates x0..x{d-1}, then re, im.
std::string field_to_csv(const SampledField& f);

/// Parses a grid spec "min:max:count" per axis, axes separated by ','.
/// A single axis spec is repeated `dims` times.
std::vector<Axis> parse_grid_spec(const std::string& spec, std::size_t dims);

}  // namespace lagcalc
