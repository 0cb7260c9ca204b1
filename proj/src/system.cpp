#include "rankrec/system.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankrec/errors.hpp"

namespace rankrec {

using expr::Expr;
using expr::Kind;

ScalarFamily::ScalarFamily(int memory, int period, std::vector<std::vector<expr::ScalarExpr>> grid)
    : M(memory), P(period), f(std::move(grid)) {
  if (M < 1 || P < 1) throw ArgumentError("ScalarFamily: M and P must be >= 1");
  if (f.size() != static_cast<std::size_t>(M)) throw ArgumentError("ScalarFamily: grid needs M rows");
  for (const auto& row : f) {
    if (row.size() != static_cast<std::size_t>(P)) throw ArgumentError("ScalarFamily: grid rows need P entries");
    for (const auto& e : row) {
      if (e.ast.empty()) throw ArgumentError("ScalarFamily: empty grid entry");
    }
  }
}

double ScalarFamily::eval(int i, double x, long n) const {
  const int phase = phase_of(n, P);
  return expr::eval(at(i, phase), x, phase);
}

void RankSchedule::validate(int memory, int period) const {
  if (ks.size() != static_cast<std::size_t>(period)) {
    throw ArgumentError("rank schedule has " + std::to_string(ks.size()) + " entries, expected P = " +
                        std::to_string(period));
  }
  for (int k : ks) {
    if (k < 1 || k > memory) {
      throw ArgumentError("rank index " + std::to_string(k) + " outside 1..M = " + std::to_string(memory));
    }
  }
}

BlockSystem::BlockSystem(int memory, int period, std::vector<expr::BlockExpr> updates)
    : M(memory), P(period), G(std::move(updates)) {
  if (M < 1 || P < 1) throw ArgumentError("BlockSystem: M and P must be >= 1");
  if (G.size() != static_cast<std::size_t>(P)) throw ArgumentError("BlockSystem: need exactly P updates");
  for (const auto& g : G) {
    if (g.arity != M || expr::max_y_index(g.ast) > M) throw ArgumentError("BlockSystem: update arity must be M");
  }
}

FamilyCertificate certify_family(ScalarFamily& family, DomainInterval dom, int grid_points, double safety_factor) {
  FamilyCertificate cert;
  cert.entries.resize(static_cast<std::size_t>(family.M));
  bool all_exact = true;
  long samples = 0;
  double worst = 0.0;
  for (int i = 1; i <= family.M; ++i) {
    for (int ph = 1; ph <= family.P; ++ph) {
      auto est = estimate_scalar_lipschitz(family.at(i, ph), ph, dom, grid_points, safety_factor);
      all_exact = all_exact && est.method == LipschitzMethod::AnalyticAffine;
      samples += est.samples;
      worst = std::max(worst, est.bound);
      cert.entries[static_cast<std::size_t>(i - 1)].push_back(std::move(est));
    }
  }
  cert.overall.bound = worst;
  cert.overall.samples = samples;
  if (all_exact) {
    cert.overall.method = LipschitzMethod::AnalyticAffine;
    cert.overall.note = "exact";
  } else {
    cert.overall.method = LipschitzMethod::DerivativeSampling;
    cert.overall.safety_factor = safety_factor;
    cert.overall.window = dom;
  }
  family.alpha_bound = cert.overall;
  return cert;
}

std::vector<LipschitzEstimate> certify_block(BlockSystem& system, DomainInterval dom, long pairs, std::uint64_t seed) {
  std::vector<LipschitzEstimate> out;
  LipschitzEstimate overall;
  overall.method = LipschitzMethod::PairSampling;
  overall.window = dom;
  overall.note = "lower bound";
  for (int ph = 1; ph <= system.P; ++ph) {
    auto est = estimate_block_lipschitz(system.at_phase(ph), dom, pairs, seed + static_cast<std::uint64_t>(ph));
    overall.bound = std::max(overall.bound, est.bound);
    overall.samples += est.samples;
    out.push_back(std::move(est));
  }
  system.L_bound = overall;
  return out;
}

BlockSystem rank_family_to_block(const ScalarFamily& family, const RankSchedule& schedule) {
  schedule.validate(family.M, family.P);
  std::vector<expr::BlockExpr> updates;
  updates.reserve(static_cast<std::size_t>(family.P));
  for (int ph = 1; ph <= family.P; ++ph) {
    std::vector<Expr> terms;
    for (int i = 1; i <= family.M; ++i) terms.push_back(expr::bind_to_block(family.at(i, ph), i, ph));
    Expr g = family.M == 1 ? terms.front() : Expr::rank(schedule.at_phase(ph), std::move(terms));
    updates.push_back(expr::BlockExpr{std::move(g), family.M});
  }
  BlockSystem sys(family.M, family.P, std::move(updates));
  sys.L_bound = family.alpha_bound;
  return sys;
}

void require_shape(const Matrix& A, std::size_t rows, std::size_t cols, const char* what) {
  if (A.size() != rows) {
    throw ArgumentError(std::string(what) + ": expected " + std::to_string(rows) + " rows, got " +
                        std::to_string(A.size()));
  }
  for (const auto& row : A) {
    if (row.size() != cols) {
      throw ArgumentError(std::string(what) + ": expected " + std::to_string(cols) + " columns per row");
    }
    for (double v : row) {
      if (!std::isfinite(v)) throw ArgumentError(std::string(what) + ": non-finite entry");
    }
  }
}

namespace {

Expr affine_expr(double slope, double intercept) {
  return Expr::binary(Kind::Add, Expr::binary(Kind::Mul, Expr::number(slope), Expr::var_x()),
                      Expr::number(intercept));
}

}  // namespace

RankSystem affine_matrix_system(const Matrix& A, const Matrix& B, int k) {
  if (A.empty() || A.front().empty()) throw ArgumentError("affine_matrix_system: empty A");
  const std::size_t P = A.size();
  const std::size_t M = A.front().size();
  require_shape(A, P, M, "affine_matrix_system A");
  require_shape(B, P, M, "affine_matrix_system B (must match A)");

  std::vector<std::vector<expr::ScalarExpr>> grid(M);
  double alpha = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t ph = 0; ph < P; ++ph) {
      grid[i].push_back(expr::ScalarExpr{affine_expr(A[ph][i], B[ph][i])});
      alpha = std::max(alpha, std::abs(A[ph][i]));
    }
  }
  ScalarFamily family(static_cast<int>(M), static_cast<int>(P), std::move(grid));
  LipschitzEstimate est;
  est.bound = alpha;
  est.method = LipschitzMethod::AnalyticAffine;
  est.note = "exact";
  family.alpha_bound = est;

  RankSchedule schedule = RankSchedule::constant(k, static_cast<int>(P));
  schedule.validate(family.M, family.P);
  return RankSystem{std::move(family), std::move(schedule)};
}

RankSystem power_max_system(const Matrix& A, const std::vector<double>& alphas, PowerTransform transform) {
  if (A.empty() || A.front().empty()) throw ArgumentError("power_max_system: empty A");
  const std::size_t P = A.size();
  const std::size_t M = A.front().size();
  require_shape(A, P, M, "power_max_system A");
  if (alphas.size() != M) throw ArgumentError("power_max_system: need one exponent per lag");
  for (const auto& row : A) {
    for (double v : row) {
      if (!(v > 0.0)) throw ArgumentError("power_max_system: coefficients must be positive");
    }
  }
  double alpha = 0.0;
  for (double a : alphas) {
    if (!(std::abs(a) < 1.0)) throw ArgumentError("power_max_system: exponents must lie in (-1, 1)");
    alpha = std::max(alpha, std::abs(a));
  }

  std::vector<std::vector<expr::ScalarExpr>> grid(M);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t ph = 0; ph < P; ++ph) {
      Expr e;
      if (transform == PowerTransform::Log) {
        e = affine_expr(alphas[i], std::log(A[ph][i]));
      } else {
        Expr power = Expr::call(expr::Func::Exp, {Expr::binary(Kind::Mul, Expr::number(alphas[i]),
                                                               Expr::call(expr::Func::Ln, {Expr::var_x()}))});
        e = Expr::binary(Kind::Mul, Expr::number(A[ph][i]), std::move(power));
      }
      grid[i].push_back(expr::ScalarExpr{std::move(e)});
    }
  }
  ScalarFamily family(static_cast<int>(M), static_cast<int>(P), std::move(grid));
  LipschitzEstimate est;
  est.bound = alpha;
  est.method = LipschitzMethod::AnalyticAffine;
  est.note = transform == PowerTransform::Log ? "exact" : "exact in log coordinates (y = ln x)";
  family.alpha_bound = est;
  return RankSystem{std::move(family), RankSchedule::constant(1, static_cast<int>(P))};
}

BlockSystem max_minus_rank_system(const ScalarFamily& autonomous, int period) {
  if (autonomous.P != 1) throw ArgumentError("max_minus_rank_system: expects an autonomous family (P = 1)");
  if (period < 1 || period > autonomous.M) {
    throw ArgumentError("max_minus_rank_system: needs 1 <= P <= M (rank index cycles through 1..P)");
  }
  const int M = autonomous.M;
  std::vector<Expr> terms;
  for (int i = 1; i <= M; ++i) terms.push_back(expr::bind_to_block(autonomous.at(i, 1), i, 1));

  std::vector<expr::BlockExpr> updates;
  for (int ph = 1; ph <= period; ++ph) {
    const int k = ph % period + 1;
    Expr diff = Expr::binary(Kind::Sub, Expr::rank(1, terms), Expr::rank(k, terms));
    updates.push_back(expr::BlockExpr{Expr::binary(Kind::Mul, Expr::number(0.5), std::move(diff)), M});
  }
  BlockSystem sys(M, period, std::move(updates));
  sys.L_bound = autonomous.alpha_bound;
  return sys;
}

}  // namespace rankrec
