#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "rankrec/block_map.hpp"
#include "rankrec/errors.hpp"
#include "rankrec/orbit.hpp"
#include "rankrec/random.hpp"
#include "rankrec/simulate.hpp"
#include "rankrec/verify.hpp"

using namespace rankrec;

namespace {

ScalarFamily family(int M, int P, const std::vector<std::vector<std::string>>& grid, bool certify = true) {
  std::vector<std::vector<expr::ScalarExpr>> g;
  for (const auto& row : grid) {
    g.emplace_back();
    for (const auto& s : row) g.back().push_back(expr::parse_scalar(s));
  }
  ScalarFamily fam(M, P, std::move(g));
  if (certify) certify_family(fam, {});
  return fam;
}

RankSystem median_exp_sin() {
  std::vector<std::vector<std::string>> grid;
  for (const char* b : {"0.7", "1.3", "2.1"}) {
    const std::string f = std::string("exp(0.1*sin(") + b + " + 2*pi*n/4) - x^2)";
    grid.push_back({f, f, f, f});
  }
  return RankSystem{family(3, 4, grid), RankSchedule::constant(2, 4)};
}

Trajectory from_values(std::vector<double> v) {
  Trajectory t;
  t.values = std::move(v);
  return t;
}

}  // namespace

TEST_CASE("period-three trajectory of the max of negations") {
  const RankSystem rs = affine_matrix_system({{-1, -1}}, {{0, 0}}, 1);
  const Trajectory t = iterate(rs, InitialCondition{{1, 2}}, 30);
  CHECK(std::vector<double>(t.values.begin(), t.values.begin() + 9) ==
        std::vector<double>{1, 2, -1, 1, 1, -1, 1, 1, -1});
  const auto orbit = detect_period(t, 3, 1e-9, 0.5);
  REQUIRE(orbit);
  CHECK(orbit->period == 3);
  CHECK(orbit->onset == 3);
  CHECK_FALSE(detect_period(t, 2, 1e-9, 0.5));
}

TEST_CASE("scalar contraction converges to its fixed point") {
  const RankSystem rs{family(1, 1, {{"0.5*x + 1"}}), RankSchedule::constant(1, 1)};
  const Trajectory t = iterate(rs, InitialCondition{{0}}, 200);
  CHECK(t.size() == 200);
  CHECK(t.at(1) == 0);
  CHECK(t.at(2) == 1);
  CHECK(t.at(3) == 1.5);
  const auto orbit = detect_period(t, 4);
  REQUIRE(orbit);
  CHECK(orbit->period == 1);
  CHECK(std::abs(orbit->phase_values[0] - 2.0) <= 1e-12);
  const auto rate = fit_convergence_rate(t, *orbit);
  REQUIRE(rate);
  CHECK(*rate == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("direct and block routes give identical trajectories") {
  const RankSystem rs = median_exp_sin();
  const BlockSystem bs = rank_family_to_block(rs.family, rs.schedule);
  const InitialCondition init{{0.3, -0.2, 1.1}};
  const Trajectory a = iterate(rs, init, 500);
  const Trajectory b = iterate(bs, init, 500);
  CHECK(a.values == b.values);
}

TEST_CASE("median system settles on a cycle dividing the forcing period") {
  const RankSystem rs = median_exp_sin();
  const Trajectory t = iterate(rs, InitialCondition{{0, 0, 0}}, 10'000);
  const auto orbit = detect_period(t, 16);
  REQUIRE(orbit);
  CHECK(4 % orbit->period == 0);

  const BlockMap map(rank_family_to_block(rs.family, rs.schedule));
  const FixedPointResult fp = solve_fixed_point(map, std::vector<double>(12, 0.0));
  const PeriodicOrbit block_orbit = extract_periodic_orbit(fp.x_star, 4, 1e-10);
  CHECK(aligned_distance(*orbit, block_orbit) <= 1e-8);
}

TEST_CASE("period detection edge cases") {
  const Trajectory flat = from_values(std::vector<double>(400, 3.5));
  for (int p_max : {1, 2, 7, 50}) {
    const auto o = detect_period(flat, p_max);
    REQUIRE(o);
    CHECK(o->period == 1);
    CHECK(o->onset == 1);
  }
  CHECK_THROWS_AS(detect_period(flat, 51), ArgumentError);
  CHECK_THROWS_AS(detect_period(flat, 0), ArgumentError);
  CHECK_THROWS_AS(detect_period(flat, 2, 1e-9, 0.0), ArgumentError);

  std::vector<double> alt;
  for (int n = 0; n < 400; ++n) alt.push_back(n % 2 == 0 ? 1.0 : -1.0);
  const auto o2 = detect_period(from_values(alt), 1);
  CHECK_FALSE(o2);
  const auto o3 = detect_period(from_values(alt), 4);
  REQUIRE(o3);
  CHECK(o3->period == 2);
  CHECK(o3->at(1) == 1.0);
  CHECK(o3->at(2) == -1.0);
}

TEST_CASE("simulation errors carry the failing step and the partial run") {
  const RankSystem rs{family(1, 1, {{"ln(x)"}}, false), RankSchedule::constant(1, 1)};
  try {
    iterate(rs, InitialCondition{{0.5}}, 10);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.step() == 3);
    REQUIRE(e.partial().size() == 2);
    CHECK(e.partial()[0] == 0.5);
    CHECK(e.partial()[1] == std::log(0.5));
  }
  CHECK_THROWS_AS(iterate(rs, InitialCondition{{1, 2}}, 10), ArgumentError);
  CHECK_THROWS_AS(iterate(rs, InitialCondition{{NAN}}, 10), NumericDomainError);
}

TEST_CASE("iteration is deterministic") {
  const RankSystem rs = median_exp_sin();
  const InitialCondition init{{0.9, -1.4, 2.2}};
  CHECK(iterate(rs, init, 2000).values == iterate(rs, init, 2000).values);
}

TEST_CASE("orbit anchoring and distances") {
  const PeriodicOrbit a{.period = 2, .phase_values = {1.0, 2.0}, .first_index = 1};
  const PeriodicOrbit b{.period = 2, .phase_values = {2.0, 1.0}, .first_index = 1};
  const PeriodicOrbit c{.period = 2, .phase_values = {1.0, 2.0}, .first_index = 3};
  const PeriodicOrbit k{.period = 1, .phase_values = {1.5}};
  CHECK(a.at(1) == 1.0);
  CHECK(a.at(2) == 2.0);
  CHECK(a.at(-1) == 1.0);
  CHECK(a.at(0) == 2.0);
  CHECK(aligned_distance(a, b) == 1.0);
  CHECK(rotation_distance(a, b) == 0.0);
  CHECK(aligned_distance(a, c) == 0.0);
  CHECK(aligned_distance(a, k) == 0.5);
  const PeriodicOrbit broken{.period = 3, .phase_values = {1.0}};
  CHECK_THROWS_AS(broken.at(1), ArgumentError);
}

TEST_CASE("convergence report over several seeds") {
  const RankSystem rs = median_exp_sin();
  CHECK_THROWS_AS(convergence_report(rs, {InitialCondition{{0, 0, 0}}}, 1000), ArgumentError);
  Rng rng(11);
  std::vector<InitialCondition> seeds;
  for (int i = 0; i < 4; ++i) seeds.push_back(gen::seed(rng, 3, -2, 2));
  const ConvergenceReport rep = convergence_report(rs, seeds, 5000);
  REQUIRE(rep.seeds.size() == 4);
  for (std::size_t a = 0; a < 4; ++a) {
    REQUIRE(rep.seeds[a].orbit);
    CHECK(rep.distance[a][a] == 0.0);
    for (std::size_t b = 0; b < 4; ++b) {
      REQUIRE(rep.distance[a][b]);
      CHECK(*rep.distance[a][b] == *rep.distance[b][a]);
      CHECK(*rep.rotation_distance[a][b] <= *rep.distance[a][b]);
    }
  }
  REQUIRE(rep.max_distance());
  CHECK(*rep.max_distance() <= 1e-8);
  CHECK(rep.p_max == 16);
  REQUIRE(rep.alpha);
  REQUIRE(rep.rate_ceiling);
  CHECK(*rep.rate_ceiling == doctest::Approx(std::pow(*rep.alpha, 1.0 / 3.0)));
}

TEST_CASE("tent map iterates collapse onto the fixed point 1 in double precision") {
  const RankSystem rs{family(1, 1, {{"max(1 - 2*x, 2*x - 1)"}}), RankSchedule::constant(1, 1)};
  for (double x0 : {0.1, 0.3, 0.7}) {
    const Trajectory t = iterate(rs, InitialCondition{{x0}}, 200);
    CHECK(t.at(200) == 1.0);
  }
}
