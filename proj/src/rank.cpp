#include "rankrec/rank.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "rankrec/errors.hpp"

namespace rankrec {

namespace {

double select_descending(double* first, double* last, std::size_t k) {
  double* nth = first + (k - 1);
  std::nth_element(first, nth, last, std::greater<double>());
  return *nth;
}

}  // namespace

double k_rank(std::span<const double> v, RankIndex k) {
  if (v.empty()) throw ArgumentError("k_rank: empty vector");
  if (k.k < 1 || static_cast<std::size_t>(k.k) > v.size()) {
    throw ArgumentError("k_rank: rank " + std::to_string(k.k) + " outside 1.." +
                        std::to_string(v.size()));
  }
  for (double e : v) {
    if (!std::isfinite(e)) throw NumericDomainError("k_rank: non-finite entry");
  }
  const auto rank = static_cast<std::size_t>(k.k);
  if (rank == 1) return *std::max_element(v.begin(), v.end());
  if (rank == v.size()) return *std::min_element(v.begin(), v.end());

  constexpr std::size_t kInline = 32;
  if (v.size() <= kInline) {
    std::array<double, kInline> buf;
    std::copy(v.begin(), v.end(), buf.begin());
    return select_descending(buf.data(), buf.data() + v.size(), rank);
  }
  std::vector<double> buf(v.begin(), v.end());
  return select_descending(buf.data(), buf.data() + buf.size(), rank);
}

double sup_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw ArgumentError("sup_distance: lengths " + std::to_string(x.size()) + " and " +
                        std::to_string(y.size()) + " differ");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

double median(std::span<const double> v) {
  if (v.size() % 2 == 0) {
    throw ArgumentError("median: length " + std::to_string(v.size()) + " is not odd");
  }
  return k_rank(v, RankIndex(static_cast<int>((v.size() + 1) / 2)));
}

}  // namespace rankrec
