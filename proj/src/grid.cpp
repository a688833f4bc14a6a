#include "mtlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace mtlab {

BreakpointGrid::BreakpointGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2)
    fail(ErrorCode::InvalidArgument, "breakpoint grid needs at least two points");
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i - 1] < points_[i]) || same_position(points_[i - 1], points_[i]))
      fail(ErrorCode::InvalidArgument, "breakpoint grid must be strictly increasing");
}

Interval BreakpointGrid::test_interval(std::size_t i) const {
  const double inf = std::numeric_limits<double>::infinity();
  if (i == 0) return Interval::open_closed(-inf, points_.front());
  if (i <= segment_count()) return Interval::open_closed(points_[i - 1], points_[i]);
  if (i == segment_count() + 1) return Interval::open(points_.back(), inf);
  fail(ErrorCode::OutOfRange, "test interval index out of range");
}

int BreakpointGrid::index_at(double p) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), p);
  if (it != points_.end() && same_position(*it, p))
    return static_cast<int>(it - points_.begin());
  if (it != points_.begin() && same_position(*std::prev(it), p))
    return static_cast<int>(it - points_.begin()) - 1;
  return -1;
}

std::size_t BreakpointGrid::interval_index(double p) const {
  int at = index_at(p);
  if (at >= 0) return static_cast<std::size_t>(at);  // x_i closes interval i
  auto it = std::upper_bound(points_.begin(), points_.end(), p);
  return static_cast<std::size_t>(it - points_.begin());
}

int BreakpointGrid::next_index_after(double p) const {
  int at = index_at(p);
  if (at >= 0) return at + 1 < static_cast<int>(points_.size()) ? at + 1 : -1;
  auto it = std::upper_bound(points_.begin(), points_.end(), p);
  return it == points_.end() ? -1 : static_cast<int>(it - points_.begin());
}

double BreakpointGrid::min_gap() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < points_.size(); ++i)
    best = std::min(best, points_[i] - points_[i - 1]);
  return best;
}

BreakpointGrid grid_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("grid JSON: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorCode::ParseError, "grid JSON must be an array of numbers");
  std::vector<double> pts;
  for (const auto& v : j) {
    if (!v.is_number()) fail(ErrorCode::ParseError, "grid JSON must be an array of numbers");
    pts.push_back(v.get<double>());
  }
  return BreakpointGrid(std::move(pts));
}

std::string grid_to_json(const BreakpointGrid& grid) {
  nlohmann::json arr = grid.points();
  return arr.dump();
}

}  // namespace mtlab
