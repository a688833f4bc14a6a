#include "mtlab/piecewise_linear.hpp"

#include <algorithm>
#include <cmath>

namespace mtlab {

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size())
    fail(ErrorCode::InvalidArgument, "piecewise-linear table needs matching nonempty knots/values");
  for (std::size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i - 1] < knots_[i]))
      fail(ErrorCode::InvalidArgument, "piecewise-linear knots must be strictly increasing");
  for (double v : values_)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "piecewise-linear values must be finite");
}

double PiecewiseLinearFn::operator()(double x) const {
  if (x <= knots_.front()) return values_.front();
  if (x >= knots_.back()) return values_.back();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - knots_.begin());
  double t = (x - knots_[hi - 1]) / (knots_[hi] - knots_[hi - 1]);
  return values_[hi - 1] + t * (values_[hi] - values_[hi - 1]);
}

double PiecewiseLinearFn::sup() const { return *std::max_element(values_.begin(), values_.end()); }

double PiecewiseLinearFn::inf() const { return *std::min_element(values_.begin(), values_.end()); }

double PiecewiseLinearFn::lipschitz() const {
  double lip = 0.0;
  for (std::size_t i = 1; i < knots_.size(); ++i)
    lip = std::max(lip, std::fabs(values_[i] - values_[i - 1]) / (knots_[i] - knots_[i - 1]));
  return lip;
}

double PiecewiseLinearFn::inf_on(double lo, double hi) const {
  double best = std::min((*this)(lo), (*this)(hi));
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (lo <= knots_[i] && knots_[i] <= hi) best = std::min(best, values_[i]);
  return best;
}

double PiecewiseLinearFn::sup_on(double lo, double hi) const {
  double best = std::max((*this)(lo), (*this)(hi));
  for (std::size_t i = 0; i < knots_.size(); ++i)
    if (lo <= knots_[i] && knots_[i] <= hi) best = std::max(best, values_[i]);
  return best;
}

bool PiecewiseLinearFn::is_constant(double v) const {
  return std::all_of(values_.begin(), values_.end(), [v](double x) { return x == v; });
}

}  // namespace mtlab
