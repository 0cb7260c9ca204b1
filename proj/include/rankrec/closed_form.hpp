#pragma once

#include <functional>
#include <span>
#include <vector>

#include "rankrec/expr.hpp"
#include "rankrec/orbit.hpp"
#include "rankrec/rank.hpp"
#include "rankrec/system.hpp"

namespace rankrec {

using ScalarFn = std::function<double(double)>;

/// x -> f(x, n) with n fixed.
ScalarFn as_function(const expr::ScalarExpr& f, long n = 1);

struct FixedPointOptions {
  double tol = 1e-14;     // on |f(x) - x|, scaled by max(1, |x|)
  double damping = 0.5;   // x <- x + damping * (f(x) - x)
  long max_iter = 1'000'000;
  double start = 0.0;
};

/// Fixed point of a scalar contraction by damped iteration. Throws
/// ConvergenceError when the residual does not reach tol.
double scalar_fixed_point(const ScalarFn& f, FixedPointOptions opts = {});
double scalar_fixed_point(const expr::ScalarExpr& f, FixedPointOptions opts = {});

/// Limit of the autonomous recurrence x_n = k-rank{ f_i(x_{n-i}) }: the k-th
/// largest of the individual fixed points.
double autonomous_rank_limit(std::span<const ScalarFn> fs, RankIndex k, FixedPointOptions opts = {});

/// Period-two limit of
///   x_{2i}   = max{ f1(x_{2i-1}), f2(x_{2i-2}) }
///   x_{2i+1} = max{ g1(x_{2i}),   g2(x_{2i-1}) }
/// with r1 = fix(f1 o g1), r2 = g1(r1), r3 = fix(f2), r4 = fix(g2):
///   x_even = max{ f1(max{r2, r4}), r3 },  x_odd = max{ g1(max{r1, r3}), r4 }.
struct P2M2Orbit {
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double x_even = 0.0;
  double x_odd = 0.0;
  int period = 2;
  /// Which of the four (max{r1,r3}, max{r2,r4}) cases applies, 1..4:
  /// (r1,r2), (r3,r4), (r1,r4), (r3,r2). Ties take the r1 / r2 branch.
  int table_row = 1;
  bool tie_r1_r3 = false;
  bool tie_r2_r4 = false;
  /// x_even = f1(r4) > r3 together with x_odd = g1(r3) > r4.
  bool excluded_combination = false;

  /// Anchored with odd times at phase 1: phase_values = {x_odd, x_even}, or a
  /// single value when the orbit collapses to period one.
  PeriodicOrbit orbit() const;
};

P2M2Orbit p2m2_max_orbit(const ScalarFn& f1, const ScalarFn& f2, const ScalarFn& g1, const ScalarFn& g2,
                         FixedPointOptions opts = {});

/// Limit of x_n = max{ A[phase][0] x_{n-1}^alpha1, A[phase][1] x_{n-2}^alpha2 }
/// with P = 2 (A laid out as in power_max_system: row = phase, column = lag;
/// even n is phase 2).
struct PowerLimit {
  double x_even = 0.0;
  double x_odd = 0.0;
};

/// Explicit closed form, valid for every alpha in (-1, 1):
///   x_even = max{ A21 * max{ A11^(1/(1-a1^2)) A21^(a1/(1-a1^2)), A12^(1/(1-a2)) }^a1, A22^(1/(1-a2)) }
///   x_odd  = max{ A11 * max{ A21^(1/(1-a1^2)) A11^(a1/(1-a1^2)), A22^(1/(1-a2)) }^a1, A12^(1/(1-a2)) }
/// (indices here are [phase][lag], 1-based).
PowerLimit power_max_p2m2_limit(const Matrix& A, double alpha1, double alpha2);

/// The same limit written as a flat three-term max. It distributes the outer
/// power over the inner max, which is only order-preserving for alpha1 >= 0;
/// for alpha1 < 0 it can overshoot the true limit.
PowerLimit power_max_p2m2_three_term(const Matrix& A, double alpha1, double alpha2);

}  // namespace rankrec
