#include "rankrec/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rankrec/errors.hpp"

namespace rankrec {

ScalarFn as_function(const expr::ScalarExpr& f, long n) {
  return [f, n](double x) { return expr::eval(f, x, n); };
}

double scalar_fixed_point(const ScalarFn& f, FixedPointOptions opts) {
  if (!(opts.tol > 0.0)) throw ArgumentError("scalar_fixed_point: tol must be positive");
  if (!(opts.damping > 0.0 && opts.damping <= 1.0)) {
    throw ArgumentError("scalar_fixed_point: damping must lie in (0, 1]");
  }
  double x = opts.start;
  std::vector<double> trace;
  for (long it = 0; it < opts.max_iter; ++it) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericDomainError("scalar_fixed_point: non-finite iterate");
    const double res = std::abs(fx - x);
    if (res <= opts.tol * std::max(1.0, std::abs(x))) return x;
    if (trace.size() < 64) trace.push_back(res);
    x += opts.damping * (fx - x);
  }
  throw ConvergenceError("scalar_fixed_point: no convergence within " + std::to_string(opts.max_iter) + " iterations",
                         std::move(trace));
}

double scalar_fixed_point(const expr::ScalarExpr& f, FixedPointOptions opts) {
  return scalar_fixed_point(as_function(f, 1), opts);
}

double autonomous_rank_limit(std::span<const ScalarFn> fs, RankIndex k, FixedPointOptions opts) {
  std::vector<double> r;
  r.reserve(fs.size());
  for (const auto& f : fs) r.push_back(scalar_fixed_point(f, opts));
  return k_rank(r, k);
}

PeriodicOrbit P2M2Orbit::orbit() const {
  PeriodicOrbit o;
  o.period = period;
  o.first_index = 1;
  o.phase_values = period == 1 ? std::vector<double>{x_even} : std::vector<double>{x_odd, x_even};
  o.residual = period == 1 ? std::abs(x_even - x_odd) : 0.0;
  return o;
}

P2M2Orbit p2m2_max_orbit(const ScalarFn& f1, const ScalarFn& f2, const ScalarFn& g1, const ScalarFn& g2,
                         FixedPointOptions opts) {
  P2M2Orbit out;
  out.r1 = scalar_fixed_point([&](double x) { return f1(g1(x)); }, opts);
  out.r2 = g1(out.r1);
  out.r3 = scalar_fixed_point(f2, opts);
  out.r4 = scalar_fixed_point(g2, opts);

  const auto close = [&](double a, double b) {
    return std::abs(a - b) <= 10.0 * opts.tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  out.tie_r1_r3 = close(out.r1, out.r3);
  out.tie_r2_r4 = close(out.r2, out.r4);

  const bool odd_branch_r1 = out.r1 >= out.r3;
  const bool even_branch_r2 = out.r2 >= out.r4;
  const double m13 = odd_branch_r1 ? out.r1 : out.r3;
  const double m24 = even_branch_r2 ? out.r2 : out.r4;
  out.x_even = std::max(f1(m24), out.r3);
  out.x_odd = std::max(g1(m13), out.r4);

  if (odd_branch_r1 && even_branch_r2) {
    out.table_row = 1;
  } else if (!odd_branch_r1 && !even_branch_r2) {
    out.table_row = 2;
  } else if (odd_branch_r1) {
    out.table_row = 3;
  } else {
    out.table_row = 4;
  }
  out.excluded_combination = out.table_row == 2 && f1(out.r4) > out.r3 && g1(out.r3) > out.r4;
  out.period = close(out.x_even, out.x_odd) ? 1 : 2;
  return out;
}

namespace {

struct PowerParts {
  double a11, a12, a21, a22;  // [phase][lag], 1-based names
  double a1, a2;
};

PowerParts unpack(const Matrix& A, double alpha1, double alpha2) {
  require_shape(A, 2, 2, "power_max_p2m2_limit A");
  for (const auto& row : A) {
    for (double v : row) {
      if (!(v > 0.0)) throw ArgumentError("power_max_p2m2_limit: coefficients must be positive");
    }
  }
  if (!(std::abs(alpha1) < 1.0) || !(std::abs(alpha2) < 1.0)) {
    throw ArgumentError("power_max_p2m2_limit: exponents must lie in (-1, 1)");
  }
  return {A[0][0], A[0][1], A[1][0], A[1][1], alpha1, alpha2};
}

}  // namespace

PowerLimit power_max_p2m2_limit(const Matrix& A, double alpha1, double alpha2) {
  const PowerParts p = unpack(A, alpha1, alpha2);
  const double sq = 1.0 - p.a1 * p.a1;
  const double lin = 1.0 - p.a2;
  // Fixed points of the composed lag-1 maps and of the lag-2 maps, as powers.
  const double cycle_even_src = std::pow(p.a11, 1.0 / sq) * std::pow(p.a21, p.a1 / sq);
  const double cycle_odd_src = std::pow(p.a21, 1.0 / sq) * std::pow(p.a11, p.a1 / sq);
  const double lag2_even = std::pow(p.a22, 1.0 / lin);
  const double lag2_odd = std::pow(p.a12, 1.0 / lin);

  PowerLimit out;
  out.x_even = std::max(p.a21 * std::pow(std::max(cycle_even_src, lag2_odd), p.a1), lag2_even);
  out.x_odd = std::max(p.a11 * std::pow(std::max(cycle_odd_src, lag2_even), p.a1), lag2_odd);
  return out;
}

PowerLimit power_max_p2m2_three_term(const Matrix& A, double alpha1, double alpha2) {
  const PowerParts p = unpack(A, alpha1, alpha2);
  const double sq = 1.0 - p.a1 * p.a1;
  const double lin = 1.0 - p.a2;
  PowerLimit out;
  out.x_even = std::max({p.a21 * std::pow(p.a12, p.a1 / lin),
                         p.a21 * std::pow(p.a11, p.a1 / sq) * std::pow(p.a21, p.a1 * p.a1 / sq),
                         std::pow(p.a22, 1.0 / lin)});
  out.x_odd = std::max({p.a11 * std::pow(p.a22, p.a1 / lin),
                        p.a11 * std::pow(p.a21, p.a1 / sq) * std::pow(p.a11, p.a1 * p.a1 / sq),
                        std::pow(p.a12, 1.0 / lin)});
  return out;
}

}  // namespace rankrec
