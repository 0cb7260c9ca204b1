#include "rankrec/block_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankrec/errors.hpp"
#include "rankrec/rank.hpp"

namespace rankrec {

BlockMap::BlockMap(BlockSystem system) : system_(std::move(system)) {}

std::vector<double> BlockMap::apply(std::span<const double> y) const {
  std::vector<double> out(y.size());
  apply(y, out);
  return out;
}

void BlockMap::apply(std::span<const double> y, std::span<double> out) const {
  const auto s = static_cast<std::size_t>(dim());
  const auto m = static_cast<std::size_t>(system_.M);
  if (y.size() != s || out.size() != s) {
    throw ArgumentError("BlockMap::apply: expected vectors of length s = " + std::to_string(s));
  }
  if (y.data() == out.data()) throw ArgumentError("BlockMap::apply: input and output must not alias");

  std::vector<double> args(m);
  for (std::size_t k = 1; k <= s; ++k) {
    // Argument j (1-based) is F_{k-j} for j < k, else y_{s+k-j}.
    for (std::size_t j = 1; j <= m; ++j) {
      args[j - 1] = j < k ? out[k - j - 1] : y[s + k - j - 1];
    }
    const int phase = phase_of(static_cast<long>(k), system_.P);
    try {
      out[k - 1] = expr::eval(system_.at_phase(phase), args);
    } catch (const NumericDomainError& e) {
      throw NumericDomainError("block map component F_" + std::to_string(k) + ": " + e.what());
    }
  }
}

FixedPointResult solve_fixed_point(const BlockMap& map, std::span<const double> seed, SolveOptions opts) {
  if (!(opts.tol > 0.0)) throw ArgumentError("solve_fixed_point: tol must be positive");
  if (!map.system().certified() && !opts.force) {
    throw CertificationError("solve_fixed_point: system is not certified sup-contractive (use force to override)");
  }
  const auto s = static_cast<std::size_t>(map.dim());
  if (seed.size() != s) throw ArgumentError("solve_fixed_point: seed must have length s = " + std::to_string(s));

  std::vector<double> y(seed.begin(), seed.end());
  std::vector<double> next(s);
  std::vector<double> trace;
  double prev_step = 0.0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    map.apply(y, next);
    const double step = sup_distance(next, y);
    trace.push_back(step);
    if (step < opts.tol) {
      FixedPointResult r;
      r.x_star = next;
      r.iterations = it;
      map.apply(next, y);
      r.residual = sup_distance(y, next);
      r.contraction_ratio_estimate = prev_step > 0.0 ? step / prev_step : 0.0;
      return r;
    }
    prev_step = step;
    std::swap(y, next);
  }
  std::string message = "solve_fixed_point: no convergence within " + std::to_string(opts.max_iter) +
                        " iterations (last step " + std::to_string(trace.back()) + ")";
  throw ConvergenceError(std::move(message), std::move(trace));
}

ShiftReport shift_commutation_check(std::span<const double> x_star, int period, double tol) {
  if (period < 1) throw ArgumentError("shift_commutation_check: period must be >= 1");
  ShiftReport rep;
  rep.tol = tol;
  const auto p = static_cast<std::size_t>(period);
  for (std::size_t j = 0; j + p < x_star.size(); ++j) {
    const double v = std::abs(x_star[j + p] - x_star[j]);
    if (v > rep.max_violation) {
      rep.max_violation = v;
      rep.worst_index = j + 1;
    }
  }
  rep.passed = rep.max_violation <= tol;
  return rep;
}

PeriodicOrbit extract_periodic_orbit(std::span<const double> x_star, int period, double tol) {
  const ShiftReport check = shift_commutation_check(x_star, period, tol);
  if (!check.passed) {
    throw PreconditionError("extract_periodic_orbit: shift check failed (max violation " +
                            std::to_string(check.max_violation) + ")");
  }
  const double collapse_tol = 10.0 * tol;
  int prime = period;
  for (int p = 1; p < period; ++p) {
    if (period % p != 0) continue;
    if (shift_commutation_check(x_star, p, collapse_tol).passed) {
      prime = p;
      break;
    }
  }

  PeriodicOrbit orbit;
  orbit.period = prime;
  orbit.first_index = 1;
  orbit.onset = 1;
  const auto p = static_cast<std::size_t>(prime);
  for (std::size_t j = 0; j < p; ++j) {
    double sum = 0.0;
    double lo = x_star[j];
    double hi = x_star[j];
    std::size_t count = 0;
    for (std::size_t idx = j; idx < x_star.size(); idx += p) {
      sum += x_star[idx];
      lo = std::min(lo, x_star[idx]);
      hi = std::max(hi, x_star[idx]);
      ++count;
    }
    orbit.phase_values.push_back(sum / static_cast<double>(count));
    orbit.residual = std::max(orbit.residual, hi - lo);
  }
  return orbit;
}

}  // namespace rankrec
