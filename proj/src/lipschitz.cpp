#include "rankrec/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "rankrec/errors.hpp"
#include "rankrec/random.hpp"
#include "rankrec/rank.hpp"

namespace rankrec {

DomainInterval::DomainInterval(double lo_, double hi_) : lo(lo_), hi(hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ArgumentError("domain interval needs finite lo < hi");
  }
}

std::string to_string(LipschitzMethod m) {
  switch (m) {
    case LipschitzMethod::AnalyticAffine: return "analytic-affine";
    case LipschitzMethod::DerivativeSampling: return "derivative-sampling";
    case LipschitzMethod::PairSampling: return "pair-sampling";
  }
  return "unknown";
}

namespace {

double eval_at(const expr::ScalarExpr& f, double x, long n) {
  try {
    return expr::eval(f, x, n);
  } catch (const NumericDomainError& e) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Lipschitz sampling failed at x = " << x << ", n = " << n << ": " << e.what();
    throw NumericDomainError(msg.str());
  }
}

}  // namespace

LipschitzEstimate estimate_scalar_lipschitz(const expr::ScalarExpr& f, long n, DomainInterval dom,
                                            int grid_points, double safety_factor) {
  if (grid_points < 2) throw ArgumentError("estimate_scalar_lipschitz: grid_points must be >= 2");
  if (!(safety_factor >= 1.0)) throw ArgumentError("estimate_scalar_lipschitz: safety_factor must be >= 1");

  if (const auto affine = expr::affine_in_x(f, n)) {
    LipschitzEstimate est;
    est.bound = std::abs(affine->slope);
    est.method = LipschitzMethod::AnalyticAffine;
    est.note = "exact";
    return est;
  }

  const double step = dom.width() / (grid_points - 1);
  double worst = 0.0;
  for (int j = 0; j < grid_points; ++j) {
    const double x = j + 1 == grid_points ? dom.hi : dom.lo + step * j;
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    const double slope = (eval_at(f, x + h, n) - eval_at(f, x - h, n)) / (2.0 * h);
    worst = std::max(worst, std::abs(slope));
  }

  LipschitzEstimate est;
  est.bound = safety_factor * worst;
  est.method = LipschitzMethod::DerivativeSampling;
  est.samples = grid_points;
  est.safety_factor = safety_factor;
  est.window = dom;
  return est;
}

LipschitzEstimate estimate_block_lipschitz(const expr::BlockExpr& g, DomainInterval dom, long pairs,
                                           std::uint64_t seed) {
  if (pairs < 1) throw ArgumentError("estimate_block_lipschitz: pairs must be >= 1");
  const auto m = static_cast<std::size_t>(g.arity);
  Rng rng(seed);
  std::vector<double> x(m);
  std::vector<double> y(m);
  double worst = 0.0;

  for (long t = 0; t < pairs; ++t) {
    double dist = 0.0;
    do {
      for (auto& v : x) v = rng.uniform(dom.lo, dom.hi);
      if (t % 2 == 0) {
        for (auto& v : y) v = rng.uniform(dom.lo, dom.hi);
      } else {
        // Equal-magnitude move with random signs, step log-uniform in
        // [1e-4, 1] * width/2, reflected back into the window.
        const double h = 0.5 * dom.width() * std::pow(10.0, -4.0 * rng.uniform(0.0, 1.0));
        for (std::size_t i = 0; i < m; ++i) {
          const double step = rng.coin() ? h : -h;
          double cand = x[i] + step;
          if (cand < dom.lo || cand > dom.hi) cand = x[i] - step;
          y[i] = cand;
        }
      }
      dist = sup_distance(x, y);
    } while (dist == 0.0);

    double gx = 0.0;
    double gy = 0.0;
    try {
      gx = expr::eval(g, x);
      gy = expr::eval(g, y);
    } catch (const NumericDomainError& e) {
      throw NumericDomainError(std::string("Lipschitz pair sampling failed: ") + e.what());
    }
    worst = std::max(worst, std::abs(gx - gy) / dist);
  }

  LipschitzEstimate est;
  est.bound = worst;
  est.method = LipschitzMethod::PairSampling;
  est.samples = pairs;
  est.safety_factor = 1.0;
  est.window = dom;
  est.note = "lower bound";
  return est;
}

}  // namespace rankrec
