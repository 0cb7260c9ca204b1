#include <doctest.h>

#include <cmath>
#include <limits>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "rankrec/errors.hpp"
#include "rankrec/lipschitz.hpp"

using namespace rankrec;

namespace {

// Rounding floor of a sampled ratio: 16 ulps of |G| < 15 over the smallest pair step 1e-3.
constexpr double kRatioRounding = 16 * std::numeric_limits<double>::epsilon() * 15 / 1e-3;

}  // namespace

TEST_CASE("affine functions get their exact slope") {
  const auto f = expr::parse_scalar("0.5*x+1");
  for (const auto& [dom, grid, safety] :
       std::vector<std::tuple<DomainInterval, int, double>>{{{-10, 10}, 10001, 1.05}, {{0, 1}, 3, 2.0}}) {
    const LipschitzEstimate e = estimate_scalar_lipschitz(f, 1, dom, grid, safety);
    CHECK(e.bound == 0.5);
    CHECK(e.method == LipschitzMethod::AnalyticAffine);
    CHECK(e.safety_factor == 1.0);
    CHECK(e.contractive());
  }
  CHECK(estimate_scalar_lipschitz(expr::parse_scalar("-x"), 1, {}).bound == 1.0);
  CHECK_FALSE(estimate_scalar_lipschitz(expr::parse_scalar("-x"), 1, {}).contractive());
}

TEST_CASE("tent map is flagged with bound about 2") {
  const LipschitzEstimate e = estimate_scalar_lipschitz(expr::parse_scalar("max(1-2*x,2*x-1)"), 1, {-2, 2});
  CHECK(e.method == LipschitzMethod::DerivativeSampling);
  CHECK(e.bound == doctest::Approx(2.0 * 1.05).epsilon(1e-6));
  REQUIRE(e.window);
  CHECK(e.window->lo == -2);
  CHECK_FALSE(e.contractive());
}

TEST_CASE("worst median forcing phase is contractive on the grid") {
  const auto f = expr::parse_scalar("exp(0.15*1 - x^2)");
  const LipschitzEstimate raw = estimate_scalar_lipschitz(f, 1, {-5, 5}, defaults::kGridPoints, 1.0);
  // Analytic maximum of |f'| is sqrt(2) exp(0.15 - 0.5) = 0.99657945372...
  CHECK(raw.bound <= 0.9965794537229930);
  CHECK(raw.bound == doctest::Approx(0.9965794537229930).epsilon(1e-5));
  CHECK(raw.contractive());
  // The default 5% margin pushes this borderline case over 1.
  CHECK_FALSE(estimate_scalar_lipschitz(f, 1, {-5, 5}).contractive());
  // With amplitude 0.1 the margin fits: sqrt(2) exp(-0.4) * 1.05 < 1.
  const LipschitzEstimate a01 = estimate_scalar_lipschitz(expr::parse_scalar("exp(0.1 - x^2)"), 1, {-10, 10});
  CHECK(a01.bound == doctest::Approx(0.9479757002341585 * 1.05).epsilon(1e-5));
  CHECK(a01.contractive());
}

TEST_CASE("domain errors abort with the sample point") {
  CHECK_THROWS_WITH_AS(estimate_scalar_lipschitz(expr::parse_scalar("ln(x)"), 1, {-1, 1}),
                       doctest::Contains("at x ="), NumericDomainError);
  CHECK_THROWS_AS(DomainInterval(1, 1), ArgumentError);
  CHECK_THROWS_AS(DomainInterval(0, INFINITY), ArgumentError);
}

TEST_CASE("pair sampling on block functions") {
  const LipschitzEstimate lin = estimate_block_lipschitz(expr::parse_block("0.3*y1 + 0.3*y2", 2), {});
  CHECK(lin.method == LipschitzMethod::PairSampling);
  CHECK(lin.bound <= 0.6 + kRatioRounding);
  CHECK(lin.bound == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(estimate_block_lipschitz(expr::parse_block("rank(2; y1, y2, y3)", 3), {}).bound <= 1.0);
  const LipschitzEstimate proj = estimate_block_lipschitz(expr::parse_block("y1", 3), {});
  CHECK(proj.bound <= 1.0);
  CHECK(proj.bound == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pair sampling is deterministic for a seed") {
  const auto g = expr::parse_block("0.5*sin(y1) + 0.2*y2", 2);
  const double a = estimate_block_lipschitz(g, {}, 5000, 42).bound;
  const double b = estimate_block_lipschitz(g, {}, 5000, 42).bound;
  CHECK(a == b);
}

TEST_CASE("pair sampling never exceeds derivative sampling for one effective variable") {
  for (const char* body : {"0.7*sin(X)", "0.9*cos(X - 1)", "exp(0.1 - X^2)", "0.5*abs(X) + 1", "0.3*X - 2"}) {
    std::string scalar = body;
    std::string block = body;
    for (auto* s : {&scalar, &block}) {
      for (std::size_t p = s->find('X'); p != std::string::npos; p = s->find('X')) {
        s->replace(p, 1, s == &scalar ? "x" : "y1");
      }
    }
    INFO(body);
    const double deriv = estimate_scalar_lipschitz(expr::parse_scalar(scalar), 1, {}).bound;
    const double pair = estimate_block_lipschitz(expr::parse_block(block, 1), {}).bound;
    INFO("excess " << (pair - deriv));
    CHECK(pair <= deriv + kRatioRounding);
  }
}
