#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rankrec/expr.hpp"
#include "rankrec/lipschitz.hpp"

namespace rankrec {

using Matrix = std::vector<std::vector<double>>;

/// Forcing phase of time n: 1 + ((n - 1) mod P), always in 1..P.
inline int phase_of(long n, int period) {
  const long r = (n - 1) % period;
  return static_cast<int>(1 + (r < 0 ? r + period : r));
}

/// The M x P grid of scalar maps f_i(., phase). Grid expressions see n bound
/// to the phase index, so periodicity in n is structural.
struct ScalarFamily {
  int M = 1;
  int P = 1;
  std::vector<std::vector<expr::ScalarExpr>> f;  // f[i - 1][phase - 1]
  std::optional<LipschitzEstimate> alpha_bound;

  ScalarFamily() = default;
  ScalarFamily(int memory, int period, std::vector<std::vector<expr::ScalarExpr>> grid);

  const expr::ScalarExpr& at(int i, int phase) const { return f[i - 1][phase - 1]; }

  /// f_i(x, n) = f[i][phase_of(n)] evaluated with n := phase_of(n).
  double eval(int i, double x, long n) const;

  bool certified() const { return alpha_bound && alpha_bound->contractive(); }
};

/// Per-phase rank indices (k_1, ..., k_P).
struct RankSchedule {
  std::vector<int> ks;

  static RankSchedule constant(int k, int period) { return RankSchedule{std::vector<int>(period, k)}; }
  int at_phase(int phase) const { return ks[phase - 1]; }
  void validate(int memory, int period) const;
};

/// x_n = k_{phase(n)}-rank{ f_i(x_{n-i}, n) }.
struct RankSystem {
  ScalarFamily family;
  RankSchedule schedule;
};

/// x_n = G_{phase(n)}(x_{n-1}, ..., x_{n-M}).
struct BlockSystem {
  int M = 1;
  int P = 1;
  std::vector<expr::BlockExpr> G;  // G[phase - 1]
  std::optional<LipschitzEstimate> L_bound;

  BlockSystem() = default;
  BlockSystem(int memory, int period, std::vector<expr::BlockExpr> updates);

  /// Block dimension P*M.
  int s() const { return P * M; }
  const expr::BlockExpr& at_phase(int phase) const { return G[phase - 1]; }
  bool certified() const { return L_bound && L_bound->contractive(); }
};

struct InitialCondition {
  std::vector<double> values;
};

/// Per-entry and overall scalar Lipschitz estimates for a family.
struct FamilyCertificate {
  LipschitzEstimate overall;
  std::vector<std::vector<LipschitzEstimate>> entries;  // [i - 1][phase - 1]
};

/// Estimates every grid entry and stores the maximum as family.alpha_bound.
FamilyCertificate certify_family(ScalarFamily& family, DomainInterval dom,
                                 int grid_points = defaults::kGridPoints,
                                 double safety_factor = defaults::kSafetyFactor);

/// Pair-samples each G and stores the maximum as system.L_bound.
std::vector<LipschitzEstimate> certify_block(BlockSystem& system, DomainInterval dom,
                                             long pairs = defaults::kPairs,
                                             std::uint64_t seed = defaults::kSamplingSeed);

/// G[phase](y) = k_phase-rank{ f[i][phase](y_i) }. Rank is sup-non-expansive,
/// so L_bound is the family's alpha_bound.
BlockSystem rank_family_to_block(const ScalarFamily& family, const RankSchedule& schedule);

/// f[i][phase](x) = A[phase][i] x + B[phase][i] with a constant schedule k.
/// alpha_bound = max |A| exactly; entries with |A| >= 1 leave the family
/// flagged (not certified) but constructible.
RankSystem affine_matrix_system(const Matrix& A, const Matrix& B, int k);

enum class PowerTransform { Log, Raw };

/// x_n = max_i{ A[phase][i] x_{n-i}^{alpha_i} }.
/// Log: y -> ln A + alpha_i y (the state is ln x). Raw: x -> A exp(alpha_i ln x),
/// defined for x > 0 only; its bound max|alpha| holds in log coordinates.
RankSystem power_max_system(const Matrix& A, const std::vector<double>& alphas, PowerTransform transform);

/// G_phase = (max_i f_i(y_i) - k_phase-rank_i f_i(y_i)) / 2 for autonomous
/// contractions f_i (family with P == 1). The rank index cycles as
/// 1 + (n mod P); in the 1 + ((n-1) mod P) phase convention used here that is
/// k_phase = (phase mod P) + 1. Requires P <= M.
BlockSystem max_minus_rank_system(const ScalarFamily& autonomous, int period);

/// Shape check for a P x M coefficient matrix.
void require_shape(const Matrix& A, std::size_t rows, std::size_t cols, const char* what);

}  // namespace rankrec
