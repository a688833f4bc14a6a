#pragma once

#include <string>
#include <vector>

#include "mtlab/measure.hpp"

namespace mtlab {

/// The discrete states x_0 < x_1 < ... < x_N. The N+1 points induce N+2 test
/// intervals (-inf,x_0], (x_0,x_1], ..., (x_{N-1},x_N], (x_N,+inf); an atom
/// exactly at x_i belongs to the interval ending at x_i.
class BreakpointGrid {
 public:
  explicit BreakpointGrid(std::vector<double> points);

  const std::vector<double>& points() const { return points_; }
  std::size_t segment_count() const { return points_.size() - 1; }  // N
  double first() const { return points_.front(); }
  double last() const { return points_.back(); }

  std::size_t test_interval_count() const { return points_.size() + 1; }
  Interval test_interval(std::size_t i) const;

  /// Index of the grid point equal (within tolerance) to p, or -1.
  int index_at(double p) const;

  /// Index of the test interval containing p.
  std::size_t interval_index(double p) const;

  /// Smallest grid point strictly right of p (tolerance-aware), or -1.
  int next_index_after(double p) const;

  double min_gap() const;
  double last_gap() const { return points_[points_.size() - 1] - points_[points_.size() - 2]; }

 private:
  std::vector<double> points_;
};

BreakpointGrid grid_from_json(const std::string& text);
std::string grid_to_json(const BreakpointGrid& grid);

}  // namespace mtlab
