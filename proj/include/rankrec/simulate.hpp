#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rankrec/orbit.hpp"
#include "rankrec/system.hpp"

namespace rankrec {

/// x_1 ... x_N; the first M entries are the initial condition.
struct Trajectory {
  std::vector<double> values;
  std::string system;
  InitialCondition initial;

  std::size_t size() const { return values.size(); }
  double at(long n) const { return values.at(static_cast<std::size_t>(n - 1)); }
};

/// Iterates x_n = G_{phase(n)}(x_{n-1}, ..., x_{n-M}) for n = M+1 .. N.
/// A numeric failure throws SimulationError carrying n and the partial run.
Trajectory iterate(const BlockSystem& system, const InitialCondition& init, long steps,
                   std::string name = {});

/// Direct route: x_n = k_{phase(n)}-rank{ f_i(x_{n-i}, n) }, each f_i evaluated
/// on its own and ranked with k_rank.
Trajectory iterate(const RankSystem& system, const InitialCondition& init, long steps,
                   std::string name = {});

namespace defaults {
inline constexpr double kDetectTol = 1e-9;
inline constexpr double kTailFraction = 0.25;
}  // namespace defaults

/// Smallest p <= p_max with |x_{n+p} - x_n| <= tol across the final
/// tail_fraction of the trajectory, or nullopt. phase_values are the last p
/// entries; onset is the earliest n from which the relation holds to the end.
/// Throws ArgumentError if the tail holds fewer than 2*p_max entries.
std::optional<PeriodicOrbit> detect_period(const Trajectory& t, int p_max, double tol = defaults::kDetectTol,
                                           double tail_fraction = defaults::kTailFraction);

/// Per-step geometric rate exp(slope) from a least-squares fit of
/// ln|x_n - orbit(n)| on the last 50 pre-onset points that sit above the
/// rounding floor. nullopt with fewer than two usable points.
std::optional<double> fit_convergence_rate(const Trajectory& t, const PeriodicOrbit& orbit);

struct SeedOutcome {
  InitialCondition seed;
  std::optional<PeriodicOrbit> orbit;  // nullopt: detection failed
  std::optional<double> rate;
};

struct ConvergenceReport {
  std::vector<SeedOutcome> seeds;
  /// Orbit distances compared at equal absolute times (forcing-anchored).
  std::vector<std::vector<std::optional<double>>> distance;
  /// Same, minimized over cyclic re-alignment.
  std::vector<std::vector<std::optional<double>>> rotation_distance;
  std::optional<double> rate;          // worst per-seed rate
  std::optional<double> alpha;         // certified bound, when known
  std::optional<double> rate_ceiling;  // alpha^(1/M): per-step rate implied by alpha
  int period = 1;
  int p_max = 1;
  double tol = defaults::kDetectTol;

  std::optional<double> max_distance() const;
};

ConvergenceReport convergence_report(const BlockSystem& system, const std::vector<InitialCondition>& seeds,
                                     long steps, double tol = defaults::kDetectTol, int p_max = 0);

ConvergenceReport convergence_report(const RankSystem& system, const std::vector<InitialCondition>& seeds,
                                     long steps, double tol = defaults::kDetectTol, int p_max = 0);

}  // namespace rankrec
