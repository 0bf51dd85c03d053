#include "pmelab/chart.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pmelab/error.hpp"

namespace pmelab {

double Axis::spacing() const {
  return topology == Topology::Periodic ? (hi - lo) / resolution : (hi - lo) / (resolution - 1);
}

double Axis::coord(int i) const { return lo + i * spacing(); }

Chart::Chart(std::vector<Axis> axes) : n_(static_cast<int>(axes.size())), axes_(std::move(axes)) {
  if (n_ < 1 || n_ > kMaxDim)
    throw Error(ErrorCode::InvalidArgument, "chart dimension must be 1..3, got " + std::to_string(n_));
  for (int i = 0; i < n_; ++i) {
    const Axis& a = axes_[i];
    if (!(a.hi > a.lo))
      throw Error(ErrorCode::InvalidArgument, "empty extent on axis " + std::to_string(i));
    if (a.resolution < 8)
      throw Error(ErrorCode::InvalidArgument, "resolution must be >= 8 on axis " + std::to_string(i));
  }
  size_ = 1;
  for (int i = n_ - 1; i >= 0; --i) {
    strides_[i] = size_;
    size_ *= static_cast<std::size_t>(axes_[i].resolution);
  }
}

std::array<int, 3> Chart::multi_index(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int i = 0; i < n_; ++i) {
    idx[i] = static_cast<int>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return idx;
}

std::size_t Chart::flat_index(const std::array<int, 3>& idx) const {
  std::size_t f = 0;
  for (int i = 0; i < n_; ++i) f += strides_[i] * static_cast<std::size_t>(idx[i]);
  return f;
}

Vec3 Chart::point(std::size_t flat) const {
  const auto idx = multi_index(flat);
  Vec3 x{0.0, 0.0, 0.0};
  for (int i = 0; i < n_; ++i) x[i] = axes_[i].coord(idx[i]);
  return x;
}

double Chart::min_spacing() const {
  double h = axes_[0].spacing();
  for (int i = 1; i < n_; ++i) h = std::min(h, axes_[i].spacing());
  return h;
}

double Chart::cell_volume() const {
  double v = 1.0;
  for (int i = 0; i < n_; ++i) v *= axes_[i].spacing();
  return v;
}

bool Chart::contains(const Vec3& x) const {
  for (int i = 0; i < n_; ++i) {
    if (axes_[i].topology == Topology::Periodic) continue;
    const double tol = 1e-12 * axes_[i].length();
    if (x[i] < axes_[i].lo - tol || x[i] > axes_[i].hi + tol) return false;
  }
  return true;
}

bool Chart::interior(std::size_t flat) const {
  const auto idx = multi_index(flat);
  for (int i = 0; i < n_; ++i) {
    if (axes_[i].topology == Topology::Periodic) continue;
    if (idx[i] < kEdgeLayers || idx[i] >= axes_[i].resolution - kEdgeLayers) return false;
  }
  return true;
}

std::vector<std::size_t> Chart::interior_indices() const {
  std::vector<std::size_t> out;
  out.reserve(size_);
  for (std::size_t k = 0; k < size_; ++k)
    if (interior(k)) out.push_back(k);
  return out;
}

bool Chart::all_periodic() const {
  return std::all_of(axes_.begin(), axes_.end(),
                     [](const Axis& a) { return a.topology == Topology::Periodic; });
}

Chart torus_chart(int n, int resolution) {
  std::vector<Axis> axes(n, Axis{0.0, 2.0 * std::numbers::pi, Topology::Periodic, resolution});
  return Chart(axes);
}

Chart box_chart(const std::vector<double>& lo, const std::vector<double>& hi, int resolution,
                Topology topology) {
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < lo.size(); ++i) axes.push_back(Axis{lo[i], hi[i], topology, resolution});
  return Chart(axes);
}

}  // namespace pmelab
