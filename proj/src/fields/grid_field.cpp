#include "pmelab/grid_field.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

ScalarField::ScalarField(Chart chart, double time, std::vector<double> values)
    : chart_(std::move(chart)), time_(time), values_(std::move(values)) {
  if (values_.size() != chart_.size())
    throw Error(ErrorCode::ShapeMismatch, "field size " + std::to_string(values_.size()) + " vs chart size " +
                                              std::to_string(chart_.size()));
}

ScalarField::ScalarField(Chart chart, double time, double fill)
    : chart_(std::move(chart)), time_(time), values_(chart_.size(), fill) {}

ScalarField ScalarField::sample(const Chart& chart, double time, const std::function<double(const Vec3&)>& fn) {
  std::vector<double> v(chart.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = fn(chart.point(p));
  return ScalarField(chart, time, std::move(v));
}

void ScalarField::require_finite(const std::string& what) const {
  for (std::size_t p = 0; p < values_.size(); ++p)
    if (!std::isfinite(values_[p]))
      throw Error(ErrorCode::NonFiniteField, what + " is not finite at node " + std::to_string(p));
}

void ScalarField::require_same_chart(const ScalarField& other) const {
  if (chart_ != other.chart_) throw Error(ErrorCode::ShapeMismatch, "fields live on different charts");
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

SpaceTimeField::SpaceTimeField(Chart chart, std::vector<double> times, std::vector<std::vector<double>> frames)
    : chart_(std::move(chart)), times_(std::move(times)), frames_(std::move(frames)) {
  if (times_.size() != frames_.size()) throw Error(ErrorCode::ShapeMismatch, "time grid and frame count differ");
  for (const auto& f : frames_)
    if (f.size() != chart_.size()) throw Error(ErrorCode::ShapeMismatch, "frame size differs from chart size");
  for (std::size_t k = 1; k < times_.size(); ++k) {
    if (!(times_[k] > times_[k - 1])) throw Error(ErrorCode::InvalidArgument, "time grid not strictly increasing");
    const double d0 = times_[1] - times_[0];
    if (std::abs((times_[k] - times_[k - 1]) - d0) > 1e-9 * std::max(1.0, std::abs(times_.back())))
      throw Error(ErrorCode::InvalidArgument, "time grid not uniform");
  }
  for (const auto& f : frames_)
    for (double v : f)
      if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteField, "space-time field has non-finite values");
}

ScalarField SpaceTimeField::frame(std::size_t k) const { return ScalarField(chart_, times_[k], frames_[k]); }

double SpaceTimeField::dt() const { return times_.size() > 1 ? times_[1] - times_[0] : 0.0; }

SpaceTimeField SpaceTimeField::map(const std::function<double(double)>& fn) const {
  std::vector<std::vector<double>> out = frames_;
  for (auto& f : out)
    for (double& v : f) v = fn(v);
  return SpaceTimeField(chart_, times_, std::move(out));
}

ScalarField map_field(const ScalarField& a, const std::function<double(double)>& fn) {
  std::vector<double> v(a.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = fn(a[p]);
  return ScalarField(a.chart(), a.time(), std::move(v));
}

ScalarField zip_field(const ScalarField& a, const ScalarField& b, const std::function<double(double, double)>& fn) {
  a.require_same_chart(b);
  std::vector<double> v(a.size());
  for (std::size_t p = 0; p < v.size(); ++p) v[p] = fn(a[p], b[p]);
  return ScalarField(a.chart(), a.time(), std::move(v));
}

double interior_max_abs(const ScalarField& f) {
  double m = 0.0;
  const Chart& c = f.chart();
  for (std::size_t p = 0; p < f.size(); ++p)
    if (c.interior(p)) m = std::max(m, std::abs(f[p]));
  return m;
}

double interior_weighted_l2(const ScalarField& f, const std::vector<double>& density) {
  const Chart& c = f.chart();
  double s = 0.0;
  for (std::size_t p = 0; p < f.size(); ++p)
    if (c.interior(p)) s += f[p] * f[p] * density[p];
  return std::sqrt(s * c.cell_volume());
}

}  // namespace pmelab
