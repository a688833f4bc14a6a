#include "mtlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace mtlab {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::UnequalMass: return "UnequalMass";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::BranchBeforeArrival: return "BranchBeforeArrival";
    case ErrorCode::HorizonExceeded: return "HorizonExceeded";
    case ErrorCode::InvalidStep: return "InvalidStep";
    case ErrorCode::NonPositiveSpeed: return "NonPositiveSpeed";
    case ErrorCode::DenominatorNonpositive: return "DenominatorNonpositive";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::AssumptionViolated: return "AssumptionViolated";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Interval::Interval(double lo, double hi, bool lo_closed, bool hi_closed)
    : lower(lo), upper(hi), lower_closed(lo_closed), upper_closed(hi_closed) {
  bool singleton = lo == hi && lo_closed && hi_closed && std::isfinite(lo);
  if (!(lo < hi || singleton))
    fail(ErrorCode::InvalidArgument, "interval bounds must satisfy lower < upper");
}

bool Interval::contains(double p) const {
  if (std::isfinite(lower) && same_position(p, lower)) return lower_closed;
  if (std::isfinite(upper) && same_position(p, upper)) return upper_closed;
  return lower < p && p < upper;
}

DiscreteMeasure DiscreteMeasure::make(std::vector<Atom> raw, double drop_tol) {
  for (const Atom& a : raw)
    if (a.weight < 0.0)
      fail(ErrorCode::NegativeWeight, "measure atom has negative weight");
  std::sort(raw.begin(), raw.end(),
            [](const Atom& a, const Atom& b) { return a.pos < b.pos; });

  // Merge runs of equal positions; the merged position is the mass-weighted
  // centroid (plain midpoint for zero-mass clusters).
  std::vector<Atom> merged;
  for (std::size_t i = 0; i < raw.size();) {
    std::size_t j = i;
    double wsum = 0.0, wxsum = 0.0;
    while (j < raw.size() && same_position(raw[i].pos, raw[j].pos)) {
      wsum += raw[j].weight;
      wxsum += raw[j].weight * raw[j].pos;
      ++j;
    }
    double pos = wsum > 0.0 ? wxsum / wsum : 0.5 * (raw[i].pos + raw[j - 1].pos);
    if (wsum > 0.0) merged.push_back({pos, wsum});
    i = j;
  }

  if (drop_tol > 0.0 && !merged.empty()) {
    std::vector<Atom> kept;
    std::vector<Atom> dropped;
    for (const Atom& a : merged)
      (a.weight < drop_tol ? dropped : kept).push_back(a);
    if (kept.empty()) {
      // Nothing above the threshold: keep the whole mass in one atom.
      double wsum = 0.0, wxsum = 0.0;
      for (const Atom& a : dropped) wsum += a.weight, wxsum += a.weight * a.pos;
      kept.push_back({wxsum / wsum, wsum});
    } else {
      for (const Atom& a : dropped) {
        auto it = std::lower_bound(kept.begin(), kept.end(), a.pos,
                                   [](const Atom& k, double p) { return k.pos < p; });
        std::size_t idx;
        if (it == kept.begin()) idx = 0;
        else if (it == kept.end()) idx = kept.size() - 1;
        else {
          std::size_t hi = static_cast<std::size_t>(it - kept.begin());
          idx = (a.pos - kept[hi - 1].pos) < (kept[hi].pos - a.pos) ? hi - 1 : hi;
        }
        kept[idx].weight += a.weight;
      }
    }
    merged = std::move(kept);
  }

  return from_sorted_unchecked(std::move(merged));
}

DiscreteMeasure DiscreteMeasure::from_sorted_unchecked(std::vector<Atom> atoms) {
  DiscreteMeasure m;
  m.atoms_ = std::move(atoms);
  double tv = 0.0;
  for (const Atom& a : m.atoms_) tv += a.weight;
  m.tv_ = tv;
  return m;
}

double DiscreteMeasure::mass_at(double x) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                             [](const Atom& a, double p) { return a.pos < p; });
  double w = 0.0;
  if (it != atoms_.end() && same_position(it->pos, x)) w += it->weight;
  if (it != atoms_.begin() && same_position(std::prev(it)->pos, x)) w += std::prev(it)->weight;
  return w;
}

double DiscreteMeasure::mass_on(const Interval& iv) const {
  double w = 0.0;
  for (const Atom& a : atoms_)
    if (iv.contains(a.pos)) w += a.weight;
  return w;
}

DiscreteMeasure DiscreteMeasure::restricted(const Interval& iv) const {
  std::vector<Atom> kept;
  for (const Atom& a : atoms_)
    if (iv.contains(a.pos)) kept.push_back(a);
  return from_sorted_unchecked(std::move(kept));
}

SignedAtomVector SignedAtomVector::negated() const {
  SignedAtomVector out = *this;
  for (double& w : out.weights) w = -w;
  return out;
}

SignedAtomVector difference(const DiscreteMeasure& m1, const DiscreteMeasure& m2) {
  const auto& a = m1.atoms();
  const auto& b = m2.atoms();
  SignedAtomVector out;
  out.positions.reserve(a.size() + b.size());
  out.weights.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].pos < b[j].pos &&
                          !same_position(a[i].pos, b[j].pos))) {
      out.positions.push_back(a[i].pos);
      out.weights.push_back(a[i].weight);
      ++i;
    } else if (i == a.size() || (b[j].pos < a[i].pos && !same_position(a[i].pos, b[j].pos))) {
      out.positions.push_back(b[j].pos);
      out.weights.push_back(-b[j].weight);
      ++j;
    } else {
      out.positions.push_back(a[i].pos);
      out.weights.push_back(a[i].weight - b[j].weight);
      ++i;
      ++j;
    }
  }
  return out;
}

std::string measure_to_json(const DiscreteMeasure& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Atom& a : m.atoms()) arr.push_back({a.pos, a.weight});
  return arr.dump();
}

DiscreteMeasure measure_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("measure JSON: ") + e.what());
  }
  if (!j.is_array()) fail(ErrorCode::ParseError, "measure JSON must be an array of pairs");
  std::vector<Atom> atoms;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number())
      fail(ErrorCode::ParseError, "measure JSON entries must be [position, weight]");
    atoms.push_back({entry[0].get<double>(), entry[1].get<double>()});
  }
  return DiscreteMeasure::make(std::move(atoms));
}

}  // namespace mtlab
