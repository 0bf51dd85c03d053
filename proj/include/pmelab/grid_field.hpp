#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pmelab/chart.hpp"

namespace pmelab {

/// Values on the nodes of a chart at one time.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Chart chart, double time, std::vector<double> values);
  ScalarField(Chart chart, double time, double fill = 0.0);

  static ScalarField sample(const Chart& chart, double time, const std::function<double(const Vec3&)>& fn);

  const Chart& chart() const { return chart_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Throws NonFiniteField naming the field.
  void require_finite(const std::string& what) const;
  void require_same_chart(const ScalarField& other) const;

  double min() const;
  double max() const;

 private:
  Chart chart_;
  double time_ = 0.0;
  std::vector<double> values_;
};

/// Frames on a uniform, strictly increasing time grid.
class SpaceTimeField {
 public:
  SpaceTimeField() = default;
  SpaceTimeField(Chart chart, std::vector<double> times, std::vector<std::vector<double>> frames);

  const Chart& chart() const { return chart_; }
  const std::vector<double>& times() const { return times_; }
  std::size_t frame_count() const { return frames_.size(); }
  const std::vector<double>& frame_values(std::size_t k) const { return frames_[k]; }
  ScalarField frame(std::size_t k) const;
  double dt() const;

  SpaceTimeField map(const std::function<double(double)>& fn) const;

 private:
  Chart chart_;
  std::vector<double> times_;
  std::vector<std::vector<double>> frames_;
};

/// Pointwise combination helpers.
ScalarField map_field(const ScalarField& a, const std::function<double(double)>& fn);
ScalarField zip_field(const ScalarField& a, const ScalarField& b, const std::function<double(double, double)>& fn);

/// Max norm over interior nodes (bounded axes drop two layers).
double interior_max_abs(const ScalarField& f);
/// L2 norm over interior nodes weighted by a density at each node.
double interior_weighted_l2(const ScalarField& f, const std::vector<double>& density);

}  // namespace pmelab
