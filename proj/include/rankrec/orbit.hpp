#pragma once

#include <vector>

namespace rankrec {

/// A periodic limit anchored to absolute time: phase_values[j] is the limit
/// value at every n with n = first_index + j (mod period).
struct PeriodicOrbit {
  int period = 1;
  std::vector<double> phase_values;
  double residual = 0.0;
  long onset = 1;
  long first_index = 1;

  double at(long n) const;
};

/// Sup distance between two orbits compared at the same absolute times.
double aligned_distance(const PeriodicOrbit& a, const PeriodicOrbit& b);

/// Smallest sup distance over all cyclic re-alignments of b against a.
double rotation_distance(const PeriodicOrbit& a, const PeriodicOrbit& b);

}  // namespace rankrec
