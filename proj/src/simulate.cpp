#include "rankrec/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rankrec/errors.hpp"
#include "rankrec/rank.hpp"

namespace rankrec {

namespace {

void check_init(const InitialCondition& init, int M, long steps) {
  if (init.values.size() != static_cast<std::size_t>(M)) {
    throw ArgumentError("iterate: initial condition must have length M = " + std::to_string(M));
  }
  for (double v : init.values) {
    if (!std::isfinite(v)) throw NumericDomainError("iterate: non-finite initial value");
  }
  if (steps < M) throw ArgumentError("iterate: N must be >= M");
}

template <class Step>
Trajectory run(int M, const InitialCondition& init, long steps, std::string name, Step step) {
  check_init(init, M, steps);
  Trajectory t;
  t.system = std::move(name);
  t.initial = init;
  t.values.reserve(static_cast<std::size_t>(steps));
  t.values = init.values;
  std::vector<double> args(static_cast<std::size_t>(M));
  for (long n = M + 1; n <= steps; ++n) {
    for (int i = 1; i <= M; ++i) args[static_cast<std::size_t>(i - 1)] = t.values[static_cast<std::size_t>(n - i - 1)];
    try {
      t.values.push_back(step(n, args));
    } catch (const NumericDomainError& e) {
      throw SimulationError("iterate: step n = " + std::to_string(n) + ": " + e.what(), static_cast<std::size_t>(n),
                            t.values);
    }
  }
  return t;
}

}  // namespace

Trajectory iterate(const BlockSystem& system, const InitialCondition& init, long steps, std::string name) {
  return run(system.M, init, steps, std::move(name), [&](long n, const std::vector<double>& args) {
    return expr::eval(system.at_phase(phase_of(n, system.P)), args);
  });
}

Trajectory iterate(const RankSystem& system, const InitialCondition& init, long steps, std::string name) {
  const ScalarFamily& fam = system.family;
  system.schedule.validate(fam.M, fam.P);
  std::vector<double> outputs(static_cast<std::size_t>(fam.M));
  return run(fam.M, init, steps, std::move(name), [&](long n, const std::vector<double>& args) {
    for (int i = 1; i <= fam.M; ++i) {
      outputs[static_cast<std::size_t>(i - 1)] = fam.eval(i, args[static_cast<std::size_t>(i - 1)], n);
    }
    return k_rank(outputs, RankIndex(system.schedule.at_phase(phase_of(n, fam.P))));
  });
}

std::optional<PeriodicOrbit> detect_period(const Trajectory& t, int p_max, double tol, double tail_fraction) {
  if (p_max < 1) throw ArgumentError("detect_period: p_max must be >= 1");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ArgumentError("detect_period: tail_fraction must lie in (0, 1]");
  }
  const auto N = static_cast<long>(t.size());
  const auto tail = static_cast<long>(std::ceil(tail_fraction * static_cast<double>(N)));
  if (tail < 2L * p_max) {
    throw ArgumentError("detect_period: tail of " + std::to_string(tail) + " entries is shorter than 2*p_max = " +
                        std::to_string(2L * p_max));
  }
  const long start = N - tail + 1;

  for (int p = 1; p <= p_max; ++p) {
    double worst = 0.0;
    bool ok = true;
    for (long n = start; n + p <= N; ++n) {
      const double d = std::abs(t.at(n + p) - t.at(n));
      if (!(d <= tol)) {
        ok = false;
        break;
      }
      worst = std::max(worst, d);
    }
    if (!ok) continue;

    PeriodicOrbit orbit;
    orbit.period = p;
    orbit.residual = worst;
    orbit.first_index = N - p + 1;
    for (long n = N - p + 1; n <= N; ++n) orbit.phase_values.push_back(t.at(n));
    long onset = 1;
    for (long n = start - 1; n >= 1; --n) {
      if (!(std::abs(t.at(n + p) - t.at(n)) <= tol)) {
        onset = n + 1;
        break;
      }
    }
    orbit.onset = onset;
    return orbit;
  }
  return std::nullopt;
}

std::optional<double> fit_convergence_rate(const Trajectory& t, const PeriodicOrbit& orbit) {
  constexpr std::size_t kPoints = 50;
  const double floor_scale = 100.0 * std::numeric_limits<double>::epsilon();
  std::vector<double> ns;
  std::vector<double> logs;
  for (long n = orbit.onset - 1; n >= 1 && ns.size() < kPoints; --n) {
    const double target = orbit.at(n);
    const double d = std::abs(t.at(n) - target);
    if (d > floor_scale * std::max(1.0, std::abs(target))) {
      ns.push_back(static_cast<double>(n));
      logs.push_back(std::log(d));
    }
  }
  if (ns.size() < 2) return std::nullopt;
  const auto count = static_cast<double>(ns.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    mx += ns[i];
    my += logs[i];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    sxy += (ns[i] - mx) * (logs[i] - my);
    sxx += (ns[i] - mx) * (ns[i] - mx);
  }
  if (sxx == 0.0) return std::nullopt;
  return std::exp(sxy / sxx);
}

std::optional<double> ConvergenceReport::max_distance() const {
  std::optional<double> worst;
  for (const auto& row : distance) {
    for (const auto& d : row) {
      if (!d) return std::nullopt;
      worst = std::max(worst.value_or(0.0), *d);
    }
  }
  return worst;
}

namespace {

template <class Iterate>
ConvergenceReport build_report(int M, int P, std::optional<LipschitzEstimate> alpha,
                               const std::vector<InitialCondition>& seeds, long steps, double tol, int p_max,
                               Iterate iterate_one) {
  if (seeds.size() < 2) throw ArgumentError("convergence_report: needs at least two seeds");
  ConvergenceReport rep;
  rep.period = P;
  rep.p_max = p_max > 0 ? p_max : 4 * P;
  rep.tol = tol;
  if (alpha) {
    rep.alpha = alpha->bound;
    rep.rate_ceiling = std::pow(alpha->bound, 1.0 / M);
  }
  for (const auto& seed : seeds) {
    SeedOutcome out;
    out.seed = seed;
    const Trajectory t = iterate_one(seed, steps);
    out.orbit = detect_period(t, rep.p_max, tol, defaults::kTailFraction);
    if (out.orbit) {
      out.rate = fit_convergence_rate(t, *out.orbit);
      if (out.rate) rep.rate = std::max(rep.rate.value_or(0.0), *out.rate);
    }
    rep.seeds.push_back(std::move(out));
  }
  const std::size_t k = rep.seeds.size();
  rep.distance.assign(k, std::vector<std::optional<double>>(k));
  rep.rotation_distance.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const auto& oa = rep.seeds[a].orbit;
      const auto& ob = rep.seeds[b].orbit;
      if (!oa || !ob) continue;
      if (a == b) {
        rep.distance[a][b] = 0.0;
        rep.rotation_distance[a][b] = 0.0;
      } else if (b > a) {
        rep.distance[a][b] = rep.distance[b][a] = aligned_distance(*oa, *ob);
        rep.rotation_distance[a][b] = rep.rotation_distance[b][a] = rotation_distance(*oa, *ob);
      }
    }
  }
  return rep;
}

}  // namespace

ConvergenceReport convergence_report(const BlockSystem& system, const std::vector<InitialCondition>& seeds,
                                     long steps, double tol, int p_max) {
  return build_report(system.M, system.P, system.L_bound, seeds, steps, tol, p_max,
                      [&](const InitialCondition& init, long n) { return iterate(system, init, n); });
}

ConvergenceReport convergence_report(const RankSystem& system, const std::vector<InitialCondition>& seeds,
                                     long steps, double tol, int p_max) {
  return build_report(system.family.M, system.family.P, system.family.alpha_bound, seeds, steps, tol, p_max,
                      [&](const InitialCondition& init, long n) { return iterate(system, init, n); });
}

}  // namespace rankrec
