#include "rankrec/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rankrec/errors.hpp"

namespace rankrec {

double PeriodicOrbit::at(long n) const {
  if (period < 1 || phase_values.size() != static_cast<std::size_t>(period)) {
    throw ArgumentError("PeriodicOrbit: phase_values must hold exactly `period` entries");
  }
  long j = (n - first_index) % period;
  if (j < 0) j += period;
  return phase_values[static_cast<std::size_t>(j)];
}

double aligned_distance(const PeriodicOrbit& a, const PeriodicOrbit& b) {
  const long span = std::lcm(static_cast<long>(a.period), static_cast<long>(b.period));
  double d = 0.0;
  for (long n = 1; n <= span; ++n) d = std::max(d, std::abs(a.at(n) - b.at(n)));
  return d;
}

double rotation_distance(const PeriodicOrbit& a, const PeriodicOrbit& b) {
  const long span = std::lcm(static_cast<long>(a.period), static_cast<long>(b.period));
  double best = std::numeric_limits<double>::infinity();
  for (long shift = 0; shift < span; ++shift) {
    double d = 0.0;
    for (long n = 1; n <= span; ++n) d = std::max(d, std::abs(a.at(n) - b.at(n + shift)));
    best = std::min(best, d);
  }
  return best;
}

}  // namespace rankrec
