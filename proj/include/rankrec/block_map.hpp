#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankrec/orbit.hpp"
#include "rankrec/system.hpp"

namespace rankrec {

/// The block map F: R^s -> R^s, s = P*M, advancing a whole block of s terms.
///
/// Component k is G_k applied to (F_{k-1}(y), ..., F_1(y), y_s, ..., y_k),
/// most recent first, with G_k = G[phase_of(k)]. Only the first M arguments
/// are read. Components are produced in index order without recursion.
class BlockMap {
 public:
  explicit BlockMap(BlockSystem system);

  int dim() const { return system_.s(); }
  const BlockSystem& system() const { return system_; }

  std::vector<double> apply(std::span<const double> y) const;
  void apply(std::span<const double> y, std::span<double> out) const;

 private:
  BlockSystem system_;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 10'000;
  bool force = false;
};

struct FixedPointResult {
  std::vector<double> x_star;
  int iterations = 0;
  double residual = 0.0;  // ||F(x*) - x*||_inf
  double contraction_ratio_estimate = 0.0;
};

/// Banach iteration y <- F(y) until ||F(y) - y||_inf < tol.
/// Throws CertificationError for an uncertified system unless opts.force, and
/// ConvergenceError (with the step-size trace) when max_iter is exhausted.
FixedPointResult solve_fixed_point(const BlockMap& map, std::span<const double> seed, SolveOptions opts = {});

struct ShiftReport {
  bool passed = false;
  double max_violation = 0.0;
  std::size_t worst_index = 0;  // 1-based j of the worst |x_{j+P} - x_j|
  double tol = 0.0;
};

/// Checks the shift identity x*_{j+P} = x*_j for every j in 1..s-P.
ShiftReport shift_commutation_check(std::span<const double> x_star, int period, double tol);

/// Collapses a P-periodic fixed point to its prime period p | P (agreement
/// within 10*tol) and averages the s/p repetitions of each phase; the spread
/// is recorded as the residual. Throws PreconditionError if the shift check
/// fails at tol.
PeriodicOrbit extract_periodic_orbit(std::span<const double> x_star, int period, double tol);

}  // namespace rankrec
