#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "rankrec/block_map.hpp"
#include "rankrec/errors.hpp"
#include "rankrec/random.hpp"
#include "rankrec/rank.hpp"
#include "rankrec/simulate.hpp"
#include "rankrec/verify.hpp"

using namespace rankrec;

namespace {

BlockSystem block(int M, int P, const std::vector<std::string>& updates) {
  std::vector<expr::BlockExpr> g;
  for (const auto& u : updates) g.push_back(expr::parse_block(u, M));
  BlockSystem b(M, P, std::move(g));
  certify_block(b, {}, 20'000);
  return b;
}

BlockSystem from_rank(const RankSystem& rs) { return rank_family_to_block(rs.family, rs.schedule); }

BlockSystem period_three() {
  return from_rank(affine_matrix_system({{-1, -1}}, {{0, 0}}, 1));
}

}  // namespace

TEST_CASE("block map applies components in index order") {
  const BlockMap lower(block(2, 1, {"rank(2; y1, y2)"}));
  CHECK(lower.apply(std::vector<double>{2, 4}) == std::vector<double>{2, 2});

  const BlockMap half(block(1, 1, {"0.5*y1 + 1"}));
  CHECK(half.apply(std::vector<double>{0}) == std::vector<double>{1});

  // M = 2, P = 2: F1 uses (y4, y3), F2 uses (F1, y4), F3 uses (F2, F1), F4 uses (F3, F2).
  const BlockMap two(block(2, 2, {"y1 + 10*y2", "y1 - y2"}));
  const std::vector<double> y{1, 2, 3, 4};
  const double f1 = 4 + 10 * 3;
  const double f2 = f1 - 4;
  const double f3 = f2 + 10 * f1;
  const double f4 = f3 - f2;
  CHECK(two.apply(y) == std::vector<double>{f1, f2, f3, f4});
}

TEST_CASE("block map agrees with the direct recurrence") {
  const RankSystem rs = affine_matrix_system({{0.5, -0.3, 0.2}, {0.1, 0.7, -0.6}}, {{1, 2, 3}, {-1, 0, 4}}, 2);
  const BlockSystem b = from_rank(rs);
  const BlockMap map(b);
  const InitialCondition init{{0.4, -2.0, 1.5}};
  const Trajectory t = iterate(rs, init, 3 + 6 * 5);
  // y ends with x_1 .. x_3, so block time k is simulation time k + 3. With
  // P = 2 that offset swaps the phases.
  std::vector<double> y{0, 0, 0, init.values[0], init.values[1], init.values[2]};
  const RankSystem shifted = affine_matrix_system({{0.1, 0.7, -0.6}, {0.5, -0.3, 0.2}}, {{-1, 0, 4}, {1, 2, 3}}, 2);
  const BlockMap shifted_map(from_rank(shifted));
  const std::vector<double> out = shifted_map.apply(y);
  for (std::size_t k = 0; k < 6; ++k) CHECK(out[k] == t.at(static_cast<long>(4 + k)));
}

TEST_CASE("block map argument errors") {
  const BlockMap half(block(1, 1, {"0.5*y1 + 1"}));
  CHECK_THROWS_AS(half.apply(std::vector<double>{1, 2}), ArgumentError);
  std::vector<double> v{1};
  CHECK_THROWS_AS(half.apply(v, v), ArgumentError);
  const BlockMap lg(block(1, 1, {"ln(y1 + 20)"}));
  CHECK_THROWS_WITH_AS(lg.apply(std::vector<double>{-30}), doctest::Contains("F_1"), NumericDomainError);
}

TEST_CASE("Banach solve of a scalar contraction") {
  const BlockMap half(block(1, 1, {"0.5*y1 + 1"}));
  const FixedPointResult r = solve_fixed_point(half, std::vector<double>{0});
  CHECK(std::abs(r.x_star[0] - 2.0) <= 2e-12);
  CHECK(r.iterations >= 38);
  CHECK(r.iterations <= 45);
  CHECK(r.residual < 1e-12);
  CHECK(r.contraction_ratio_estimate == doctest::Approx(0.5));
  CHECK_THROWS_AS(solve_fixed_point(half, std::vector<double>{0}, {.tol = 0}), ArgumentError);
  CHECK_THROWS_AS(solve_fixed_point(half, std::vector<double>{0, 1}), ArgumentError);
}

TEST_CASE("uncertified systems need force and then fail to converge") {
  const BlockMap map(period_three());
  CHECK_FALSE(map.system().certified());
  const std::vector<double> seed{1, 2};
  CHECK_THROWS_AS(solve_fixed_point(map, seed), CertificationError);
  try {
    solve_fixed_point(map, seed, {.tol = 1e-12, .max_iter = 500, .force = true});
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual_trace().size() == 500);
    CHECK(e.residual_trace().back() > 1.0);
  }
}

TEST_CASE("autonomous affine max fixed point") {
  const RankSystem rs = affine_matrix_system({{0.5, 0.3, 0.8}}, {{1, 2, -1}}, 1);
  const BlockMap map(from_rank(rs));
  const FixedPointResult r = solve_fixed_point(map, std::vector<double>{0, 0, 0});
  for (double v : r.x_star) CHECK(std::abs(v - 20.0 / 7.0) <= 1e-11);
  const PeriodicOrbit orbit = extract_periodic_orbit(r.x_star, 1, 1e-10);
  CHECK(orbit.period == 1);
  CHECK(orbit.phase_values[0] == doctest::Approx(20.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("shift commutation check") {
  const RankSystem rs = affine_matrix_system({{0.5, 0.2}, {-0.4, 0.6}}, {{1, -1}, {2, 0.5}}, 1);
  const BlockMap map(from_rank(rs));
  const double tol = 1e-12;
  const FixedPointResult r = solve_fixed_point(map, std::vector<double>{0, 0, 0, 0}, {.tol = tol});
  const ShiftReport ok = shift_commutation_check(r.x_star, 2, 100 * tol);
  CHECK(ok.passed);
  CHECK(ok.max_violation <= 100 * tol);

  std::vector<double> bent = r.x_star;
  bent[2] += 10 * tol;
  const ShiftReport bad = shift_commutation_check(bent, 2, tol);
  CHECK_FALSE(bad.passed);
  CHECK(bad.worst_index == 1);
  CHECK(bad.max_violation >= 9 * tol);
  CHECK_THROWS_AS(extract_periodic_orbit(bent, 2, tol), PreconditionError);
  CHECK_THROWS_AS(shift_commutation_check(bent, 0, tol), ArgumentError);
}

TEST_CASE("prime period collapse") {
  const std::vector<double> constant(8, 1.25);
  const PeriodicOrbit c = extract_periodic_orbit(constant, 4, 1e-10);
  CHECK(c.period == 1);
  CHECK(c.phase_values == std::vector<double>{1.25});
  CHECK(c.residual == 0.0);

  const Matrix A3{{0.5}, {-0.3}, {0.2}};
  const Matrix B3{{1}, {2}, {3}};
  Matrix A6 = A3;
  Matrix B6 = B3;
  A6.insert(A6.end(), A3.begin(), A3.end());
  B6.insert(B6.end(), B3.begin(), B3.end());
  const BlockMap six(from_rank(affine_matrix_system(A6, B6, 1)));
  const FixedPointResult r6 = solve_fixed_point(six, std::vector<double>(6, 0.0));
  const PeriodicOrbit o6 = extract_periodic_orbit(r6.x_star, 6, 1e-10);
  CHECK(o6.period == 3);

  const BlockMap three(from_rank(affine_matrix_system(A3, B3, 1)));
  const FixedPointResult r3 = solve_fixed_point(three, std::vector<double>(3, 0.0));
  const PeriodicOrbit o3 = extract_periodic_orbit(r3.x_star, 3, 1e-10);
  CHECK(o3.period == 3);
  CHECK(aligned_distance(o3, o6) <= 1e-10);
}

TEST_CASE("block map is alpha-contractive in the sup norm") {
  Rng rng(41);
  for (int t = 0; t < 30; ++t) {
    const int M = static_cast<int>(rng.integer(1, 4));
    const int P = static_cast<int>(rng.integer(1, 4));
    const RankSystem rs = gen::affine_rank_system(rng, M, P, 0.9);
    const double alpha = rs.family.alpha_bound->bound;
    const BlockMap map(from_rank(rs));
    const auto s = static_cast<std::size_t>(map.dim());
    for (int pair = 0; pair < 200; ++pair) {
      std::vector<double> x(s);
      std::vector<double> y(s);
      for (std::size_t j = 0; j < s; ++j) {
        x[j] = rng.uniform(-10, 10);
        y[j] = rng.uniform(-10, 10);
      }
      const double ratio = sup_distance(map.apply(x), map.apply(y)) / sup_distance(x, y);
      REQUIRE(ratio <= alpha + 1e-9);
    }
  }
}

TEST_CASE("fixed point does not depend on the seed") {
  Rng rng(43);
  for (int t = 0; t < 30; ++t) {
    const int M = static_cast<int>(rng.integer(1, 4));
    const int P = static_cast<int>(rng.integer(1, 4));
    const RankSystem rs = gen::affine_rank_system(rng, M, P, 0.9);
    const double alpha = rs.family.alpha_bound->bound;
    const BlockMap map(from_rank(rs));
    const auto s = static_cast<std::size_t>(map.dim());
    std::vector<double> a(s);
    std::vector<double> b(s);
    for (std::size_t j = 0; j < s; ++j) {
      a[j] = rng.uniform(-100, 100);
      b[j] = rng.uniform(-100, 100);
    }
    const double tol = 1e-12;
    const FixedPointResult ra = solve_fixed_point(map, a, {.tol = tol});
    const FixedPointResult rb = solve_fixed_point(map, b, {.tol = tol});
    CHECK(sup_distance(ra.x_star, rb.x_star) <= 2 * tol / (1 - alpha));
  }
}
