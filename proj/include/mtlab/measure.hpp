#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mtlab/errors.hpp"

namespace mtlab {

/// Two coordinates are the same atom position iff |a-b| <= 1e-12 * max(1,|a|,|b|).
/// The slack lets transmission points capture particles whose arrival position
/// was computed by inexact arithmetic.
inline double position_tolerance(double a, double b) {
  double s = std::fabs(a) > std::fabs(b) ? std::fabs(a) : std::fabs(b);
  return 1e-12 * (s > 1.0 ? s : 1.0);
}

inline bool same_position(double a, double b) {
  return std::fabs(a - b) <= position_tolerance(a, b);
}

struct Atom {
  double pos = 0.0;
  double weight = 0.0;

  bool operator==(const Atom&) const = default;
};

/// An interval of the real line; lower/upper may be -inf/+inf. Endpoint
/// membership tests use the position tolerance, so an atom sitting within
/// tolerance of a closed endpoint counts as inside.
struct Interval {
  double lower;
  double upper;
  bool lower_closed;
  bool upper_closed;

  Interval(double lo, double hi, bool lo_closed, bool hi_closed);

  static Interval open_closed(double lo, double hi) { return {lo, hi, false, true}; }
  static Interval closed_open(double lo, double hi) { return {lo, hi, true, false}; }
  static Interval open(double lo, double hi) { return {lo, hi, false, false}; }
  static Interval closed(double lo, double hi) { return {lo, hi, true, true}; }

  bool contains(double p) const;
};

/// Finitely supported nonnegative measure on the line: sorted atoms with
/// strictly increasing positions. Immutable after construction.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;  // zero measure

  /// Sorts, merges positions equal within tolerance (mass-weighted position),
  /// drops exact-zero weights, and pools weights below drop_tol into the
  /// nearest surviving atom so total mass is preserved exactly.
  /// Throws NegativeWeight if any weight < 0.
  static DiscreteMeasure make(std::vector<Atom> raw, double drop_tol = 0.0);

  /// Trusted path: atoms already sorted, separated and nonnegative.
  static DiscreteMeasure from_sorted_unchecked(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }

  double total_variation() const { return tv_; }

  /// Weight of the atom at x (position-tolerance match), else 0.
  double mass_at(double x) const;

  /// Mass of an arbitrary interval.
  double mass_on(const Interval& iv) const;

  DiscreteMeasure restricted(const Interval& iv) const;

  bool operator==(const DiscreteMeasure& other) const = default;

 private:
  std::vector<Atom> atoms_;
  double tv_ = 0.0;
};

/// Difference of two measures over the union support; weights are signed and
/// exact (w1 - w2 per merged position).
struct SignedAtomVector {
  std::vector<double> positions;  // strictly increasing
  std::vector<double> weights;

  SignedAtomVector negated() const;
};

SignedAtomVector difference(const DiscreteMeasure& m1, const DiscreteMeasure& m2);

/// JSON array of [position, weight] pairs, sorted. Parsing runs make().
std::string measure_to_json(const DiscreteMeasure& m);
DiscreteMeasure measure_from_json(const std::string& text);

}  // namespace mtlab
