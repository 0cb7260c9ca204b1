#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rankrec/expr.hpp"

namespace rankrec {

/// Sampling window [lo, hi]; lo < hi, both finite.
struct DomainInterval {
  double lo = -10.0;
  double hi = 10.0;

  DomainInterval() = default;
  DomainInterval(double lo_, double hi_);

  double width() const { return hi - lo; }
  bool operator==(const DomainInterval&) const = default;
};

enum class LipschitzMethod { AnalyticAffine, DerivativeSampling, PairSampling };

std::string to_string(LipschitzMethod m);

/// Estimated (sup-)Lipschitz constant. Only AnalyticAffine is exact; sampled
/// estimates are valid on `window` at best.
struct LipschitzEstimate {
  double bound = 0.0;
  LipschitzMethod method = LipschitzMethod::AnalyticAffine;
  long samples = 0;
  double safety_factor = 1.0;
  std::optional<DomainInterval> window;
  std::string note;

  bool contractive() const { return bound < 1.0; }
};

namespace defaults {
inline constexpr double kDomainLo = -10.0;
inline constexpr double kDomainHi = 10.0;
inline constexpr int kGridPoints = 10'001;
inline constexpr long kPairs = 100'000;
inline constexpr double kSafetyFactor = 1.05;
inline constexpr std::uint64_t kSamplingSeed = 0x5eed'1234ULL;
}  // namespace defaults

/// |slope| exactly for affine-in-x functions; otherwise safety_factor times the
/// largest central-difference |f'| over an evenly spaced grid on `dom`.
/// A domain error at any sample aborts with the offending point.
LipschitzEstimate estimate_scalar_lipschitz(const expr::ScalarExpr& f, long n, DomainInterval dom,
                                            int grid_points = defaults::kGridPoints,
                                            double safety_factor = defaults::kSafetyFactor);

/// Largest sampled ratio |G(x) - G(y)| / ||x - y||_inf over `pairs` pairs in
/// dom^M. Half the pairs are independent uniform draws, half move every
/// coordinate by the same magnitude with random signs (these realize the
/// l1-norm bound of linear G). This is a lower bound on the true constant: a
/// value >= 1 refutes sup-contractivity on dom.
LipschitzEstimate estimate_block_lipschitz(const expr::BlockExpr& g, DomainInterval dom,
                                           long pairs = defaults::kPairs,
                                           std::uint64_t seed = defaults::kSamplingSeed);

}  // namespace rankrec
