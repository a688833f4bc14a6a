#pragma once

#include <random>
#include <vector>

#include "mtlab/measure.hpp"

namespace testsupport {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline mtlab::DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms, double lo,
                                             double hi, double max_weight = 2.0) {
  int n = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_atoms));
  std::vector<mtlab::Atom> atoms;
  for (int i = 0; i < n; ++i)
    atoms.push_back({uniform(rng, lo, hi), uniform(rng, 0.0, max_weight)});
  return mtlab::DiscreteMeasure::make(std::move(atoms));
}

inline mtlab::DiscreteMeasure normalized(const mtlab::DiscreteMeasure& m) {
  double tv = m.total_variation();
  if (tv <= 0.0) return mtlab::DiscreteMeasure::make({{0.0, 1.0}});
  std::vector<mtlab::Atom> atoms = m.atoms();
  for (auto& a : atoms) a.weight /= tv;
  return mtlab::DiscreteMeasure::make(std::move(atoms));
}

}  // namespace testsupport
