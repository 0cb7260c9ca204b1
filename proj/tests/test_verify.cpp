#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "rankrec/errors.hpp"
#include "rankrec/random.hpp"
#include "rankrec/verify.hpp"

using namespace rankrec;

namespace {

const std::filesystem::path kDir = RANKREC_SYSTEMS_DIR;

std::string failures(const SuiteResult& r) {
  std::string out;
  for (const Check& c : r.checks) {
    if (!c.passed) out += c.name + ": " + c.detail + "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 11);
  for (const auto& name : suite_names()) CHECK(is_suite(name));
  CHECK(is_suite("system"));
  CHECK_FALSE(is_suite("nope"));
  CHECK_THROWS_AS(run_suite("nope", {}), ArgumentError);
  CHECK_THROWS_AS(run_suite("system", {}), ArgumentError);
}

TEST_CASE("randomized suites pass at reduced scale") {
  const VerifyOptions opts{.rng_seed = 7, .scale = 0.1};
  for (const auto& name : suite_names()) {
    if (name == "counterexamples") continue;
    const SuiteResult r = run_suite(name, opts);
    INFO(name << "\n" << failures(r));
    CHECK(r.name == name);
    CHECK_FALSE(r.checks.empty());
    CHECK(r.instances > 0);
    CHECK(r.passed());
  }
}

TEST_CASE("counterexample suite: period-three checks and Lipschitz flags") {
  const SuiteResult r = run_suite("counterexamples", {});
  REQUIRE(r.checks.size() == 4);
  CHECK(r.checks[0].passed);
  CHECK(r.checks[1].passed);
  CHECK(r.checks[3].passed);
  CHECK(r.checks[3].observed >= 1.0);
}

TEST_CASE("suites are deterministic and seed dependent") {
  const VerifyOptions a{.rng_seed = 99, .scale = 0.05};
  const SuiteResult r1 = run_suite("periodic_limit", a);
  const SuiteResult r2 = run_suite("periodic_limit", a);
  REQUIRE(r1.checks.size() == r2.checks.size());
  for (std::size_t i = 0; i < r1.checks.size(); ++i) {
    CHECK(r1.checks[i].observed == r2.checks[i].observed);
    CHECK(r1.checks[i].cases == r2.checks[i].cases);
  }
  const SuiteResult r3 = run_suite("periodic_limit", {.rng_seed = 100, .scale = 0.05});
  bool differs = false;
  for (std::size_t i = 0; i < r1.checks.size(); ++i) differs = differs || r1.checks[i].observed != r3.checks[i].observed;
  CHECK(differs);
}

TEST_CASE("system suite on fixtures") {
  for (const char* file : {"contraction.json", "median_exp_sin.json", "affine_p2.json", "power_p2m2_raw.json",
                           "max_minus_rank.json", "block_max.json"}) {
    const SystemDefinition def = load_system_file(kDir / file);
    const SuiteResult r = run_suite("system", {.system = &def});
    INFO(file << "\n" << failures(r));
    CHECK(r.passed());
    CHECK(r.checks.size() == 4);
  }
  const SystemDefinition p3 = load_system_file(kDir / "period3.json");
  const SuiteResult unforced = run_suite("system", {.system = &p3});
  CHECK_FALSE(unforced.passed());
  CHECK(unforced.checks.size() == 1);
  const SuiteResult forced = run_suite("system", {.system = &p3, .force = true});
  CHECK_FALSE(forced.passed());
  CHECK(forced.checks.size() > 1);
}

TEST_CASE("instance generators") {
  CHECK(gen::number(0.5) == "0.5");
  CHECK(gen::number(-2) == "(-2)");
  CHECK(gen::number(0.1) == "0.1");
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const double a = gen::slope(rng, 0.9);
    CHECK(std::abs(a) < 0.9);
    const expr::ScalarExpr f = expr::parse_scalar(gen::contraction(rng, a));
    const LipschitzEstimate est = estimate_scalar_lipschitz(f, 1, {}, 2001, 1.0);
    CHECK(est.bound <= std::abs(a) * (1 + 1e-6) + 1e-12);
    CHECK(expr::affine_in_x(expr::parse_scalar(gen::contraction(rng, a, true)), 1).has_value());
  }
  const RankSystem rs = gen::mixed_rank_system(rng, 3, 2, 0.9);
  CHECK(rs.family.certified());
  CHECK(rs.schedule.ks.size() == 2);
  const InitialCondition s = gen::seed(rng, 4, -1, 1);
  CHECK(s.values.size() == 4);
  for (double v : s.values) CHECK(std::abs(v) <= 1);
}
