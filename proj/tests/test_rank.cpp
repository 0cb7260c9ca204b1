#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "rankrec/errors.hpp"
#include "rankrec/random.hpp"
#include "rankrec/rank.hpp"

using namespace rankrec;

TEST_CASE("k_rank picks the k-th largest entry") {
  CHECK(k_rank(std::vector<double>{3, 1, 2}, RankIndex(2)) == 2);
  CHECK(k_rank(std::vector<double>{4, 4, 1}, RankIndex(2)) == 4);
  CHECK(k_rank(std::vector<double>{-5, -7}, RankIndex(1)) == -5);
  CHECK(k_rank(std::vector<double>{7}, RankIndex(1)) == 7);
  CHECK(k_rank(std::vector<double>{3, 1, 2}, RankIndex(3)) == 1);
}

TEST_CASE("k_rank works past the inline buffer size") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<std::size_t>(i)] = (i * 37) % 100;
  CHECK(k_rank(v, RankIndex(1)) == 99);
  CHECK(k_rank(v, RankIndex(50)) == 50);
  CHECK(k_rank(v, RankIndex(100)) == 0);
}

TEST_CASE("k_rank rejects bad input") {
  CHECK_THROWS_AS(k_rank(std::vector<double>{1, 2}, RankIndex(0)), ArgumentError);
  CHECK_THROWS_AS(k_rank(std::vector<double>{1, 2}, RankIndex(3)), ArgumentError);
  CHECK_THROWS_AS(k_rank(std::vector<double>{}, RankIndex(1)), ArgumentError);
  CHECK_THROWS_AS(k_rank(std::vector<double>{1, std::nan("")}, RankIndex(1)), NumericDomainError);
  CHECK_THROWS_AS(k_rank(std::vector<double>{std::numeric_limits<double>::infinity()}, RankIndex(1)),
                  NumericDomainError);
}

TEST_CASE("sup_distance") {
  CHECK(sup_distance(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0);
  CHECK(sup_distance(std::vector<double>{0, 0}, std::vector<double>{3, -4}) == 4);
  CHECK(sup_distance(std::vector<double>{1}, std::vector<double>{-1}) == 2);
  CHECK_THROWS_AS(sup_distance(std::vector<double>{1}, std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("median") {
  CHECK(median(std::vector<double>{5, 1, 3}) == 3);
  CHECK(median(std::vector<double>{2, 2, 9}) == 2);
  CHECK(median(std::vector<double>{-0.25}) == -0.25);
  CHECK_THROWS_AS(median(std::vector<double>{1, 2}), ArgumentError);
}

TEST_CASE("property: non-expansive, ordered, permutation invariant, translation equivariant") {
  Rng rng(7);
  for (int trial = 0; trial < 20'000; ++trial) {
    const auto d = static_cast<std::size_t>(rng.integer(1, 10));
    std::vector<double> x(d);
    std::vector<double> y(d);
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = trial % 2 ? static_cast<double>(rng.integer(-2, 2)) : rng.uniform(-5, 5);
      y[j] = trial % 3 ? rng.uniform(-5, 5) : x[j];
    }
    const double dist = sup_distance(x, y);
    std::vector<double> perm = x;
    for (std::size_t j = d; j > 1; --j) std::swap(perm[j - 1], perm[static_cast<std::size_t>(rng.integer(0, static_cast<long>(j) - 1))]);
    const double c = static_cast<double>(rng.integer(-8, 8));
    std::vector<double> shifted = x;
    for (double& v : shifted) v += c;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= d; ++k) {
      const RankIndex rk(static_cast<int>(k));
      const double rx = k_rank(x, rk);
      REQUIRE(std::abs(rx - k_rank(y, rk)) <= dist);
      REQUIRE(rx <= prev);
      REQUIRE(k_rank(perm, rk) == rx);
      REQUIRE(k_rank(shifted, rk) == rx + c);
      prev = rx;
    }
  }
}
