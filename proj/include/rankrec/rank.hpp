#pragma once

#include <span>

namespace rankrec {

/// 1-based rank position; k = 1 selects the maximum.
struct RankIndex {
  int k = 1;

  constexpr explicit RankIndex(int value) : k(value) {}
  constexpr bool operator==(const RankIndex&) const = default;
};

/// k-th largest entry of `v`, counting duplicates separately.
///
/// Throws ArgumentError unless 1 <= k <= v.size(), NumericDomainError on any
/// non-finite entry.
double k_rank(std::span<const double> v, RankIndex k);

/// max_i |x_i - y_i|. Throws ArgumentError on length mismatch.
double sup_distance(std::span<const double> x, std::span<const double> y);

/// Middle order statistic of an odd-length vector, k_rank(v, (M+1)/2).
double median(std::span<const double> v);

}  // namespace rankrec
