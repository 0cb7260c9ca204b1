#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rankrec/random.hpp"
#include "rankrec/system.hpp"
#include "rankrec/system_file.hpp"

namespace rankrec {

/// One pass/fail measurement inside a suite: `observed relation limit`.
struct Check {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  std::string relation;  // "<=", "<", ">=", "==", "divides"
  double limit = 0.0;
  long cases = 0;
  long failures = 0;
  std::string detail;  // first failing instance, if any
};

struct SuiteResult {
  std::string name;
  std::string description;
  long instances = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

struct VerifyOptions {
  std::uint64_t rng_seed = 20'240'101;
  /// Scales every randomized instance count (1.0 = full battery).
  double scale = 1.0;
  /// Target of the "system" suite.
  const SystemDefinition* system = nullptr;
  bool force = false;
};

/// Suites in their fixed run order (the "system" suite needs a definition and
/// is not part of the default battery).
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Each suite draws from its own generator seeded by rng_seed and the suite
/// name, so a suite gives the same result alone or inside the full battery.
SuiteResult run_suite(const std::string& name, const VerifyOptions& opts);

/// Random instances shared by the suites and the tests.
namespace gen {

/// Shortest round-trip decimal for v, parenthesized when negative.
std::string number(double v);

/// A random scalar contraction in x with Lipschitz constant |slope|:
/// one of slope*x + b, slope*sin(x) + b, slope*cos(x + c) + b, slope*abs(x - c) + b.
std::string contraction(Rng& rng, double slope, bool affine_only = false);

double slope(Rng& rng, double bound);

/// Affine rank system with |A| < a_max, |B| < 5 and a random per-phase schedule.
RankSystem affine_rank_system(Rng& rng, int M, int P, double a_max);

/// Rank system whose grid entries are random contractions with |slope| < a_max.
/// Certified on the default domain.
RankSystem mixed_rank_system(Rng& rng, int M, int P, double a_max);

InitialCondition seed(Rng& rng, int M, double lo = -10.0, double hi = 10.0);

}  // namespace gen

}  // namespace rankrec
