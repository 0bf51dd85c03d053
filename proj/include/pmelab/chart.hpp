#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pmelab/linalg.hpp"

namespace pmelab {

enum class Topology { Periodic, Bounded };

struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  Topology topology = Topology::Periodic;
  int resolution = 64;

  /// Periodic axes hold N nodes with the endpoint identified; bounded axes include both ends.
  double spacing() const;
  double coord(int i) const;
  double length() const { return hi - lo; }
  bool operator==(const Axis& o) const = default;
};

/// Logically rectangular grid over a coordinate box, row-major with the last axis fastest.
class Chart {
 public:
  Chart() = default;
  explicit Chart(std::vector<Axis> axes);

  int dim() const { return n_; }
  const Axis& axis(int i) const { return axes_[i]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return strides_[axis]; }

  std::array<int, 3> multi_index(std::size_t flat) const;
  std::size_t flat_index(const std::array<int, 3>& idx) const;
  Vec3 point(std::size_t flat) const;
  double min_spacing() const;
  double cell_volume() const;

  /// Inside the coordinate box, periodic axes wrapping freely.
  bool contains(const Vec3& x) const;
  /// Excludes the outermost two layers on bounded axes.
  bool interior(std::size_t flat) const;
  std::vector<std::size_t> interior_indices() const;
  bool all_periodic() const;

  bool operator==(const Chart& o) const { return axes_ == o.axes_; }
  bool operator!=(const Chart& o) const { return !(*this == o); }

  static constexpr int kEdgeLayers = 2;

 private:
  int n_ = 0;
  std::vector<Axis> axes_;
  std::array<std::size_t, 3> strides_{0, 0, 0};
  std::size_t size_ = 0;
};

/// Periodic box [0, 2pi)^n with the given resolution per axis.
Chart torus_chart(int n, int resolution);
Chart box_chart(const std::vector<double>& lo, const std::vector<double>& hi, int resolution,
                Topology topology);

}  // namespace pmelab
