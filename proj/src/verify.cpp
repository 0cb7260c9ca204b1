#include "rankrec/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string_view>

#include "rankrec/block_map.hpp"
#include "rankrec/closed_form.hpp"
#include "rankrec/errors.hpp"
#include "rankrec/rank.hpp"
#include "rankrec/simulate.hpp"

namespace rankrec {

bool SuiteResult::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> kNames{
      "rank_nonexpansive",     "block_direct",          "periodic_limit",   "autonomous_closed_form",
      "p2m2_closed_form",      "power_law_closed_form", "counterexamples", "max_minus_rank",
      "contraction_sides",        "p2m2_exclusion",       "empirical_contraction"};
  return kNames;
}

bool is_suite(const std::string& name) {
  const auto& names = suite_names();
  return name == "system" || std::find(names.begin(), names.end(), name) != names.end();
}

namespace gen {

std::string number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  return v < 0.0 ? "(" + s + ")" : s;
}

double slope(Rng& rng, double bound) { return rng.uniform(-bound, bound); }

std::string contraction(Rng& rng, double a, bool affine_only) {
  const long kind = affine_only ? 0 : rng.integer(0, 3);
  const double b = rng.uniform(-3.0, 3.0);
  const double c = rng.uniform(-2.0, 2.0);
  switch (kind) {
    case 0: return number(a) + "*x + " + number(b);
    case 1: return number(a) + "*sin(x) + " + number(b);
    case 2: return number(a) + "*cos(x - " + number(c) + ") + " + number(b);
    default: return number(a) + "*abs(x - " + number(c) + ") + " + number(b);
  }
}

RankSystem affine_rank_system(Rng& rng, int M, int P, double a_max) {
  Matrix A(static_cast<std::size_t>(P), std::vector<double>(static_cast<std::size_t>(M)));
  Matrix B = A;
  for (int p = 0; p < P; ++p) {
    for (int i = 0; i < M; ++i) {
      A[p][i] = rng.uniform(-a_max, a_max);
      B[p][i] = rng.uniform(-5.0, 5.0);
    }
  }
  RankSystem rs = affine_matrix_system(A, B, 1);
  for (int p = 0; p < P; ++p) rs.schedule.ks[static_cast<std::size_t>(p)] = static_cast<int>(rng.integer(1, M));
  return rs;
}

RankSystem mixed_rank_system(Rng& rng, int M, int P, double a_max) {
  std::vector<std::vector<expr::ScalarExpr>> grid(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    for (int p = 0; p < P; ++p) {
      grid[static_cast<std::size_t>(i)].push_back(expr::parse_scalar(contraction(rng, slope(rng, a_max))));
    }
  }
  RankSystem rs{ScalarFamily(M, P, std::move(grid)), RankSchedule{}};
  for (int p = 0; p < P; ++p) rs.schedule.ks.push_back(static_cast<int>(rng.integer(1, M)));
  certify_family(rs.family, DomainInterval{});
  return rs;
}

InitialCondition seed(Rng& rng, int M, double lo, double hi) {
  InitialCondition init;
  for (int i = 0; i < M; ++i) init.values.push_back(rng.uniform(lo, hi));
  return init;
}

}  // namespace gen

namespace {

constexpr long kSteps = 10'000;
constexpr double kDetectTol = 1e-9;
constexpr double kSolveTol = 1e-12;
constexpr double kExtractTol = 100.0 * kSolveTol;

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string values(const std::vector<double>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + ")";
}

/// Accumulates one Check. For "<=" and "<" the worst value is the largest
/// observed; for ">=" it is the smallest; "count" checks report failures.
class Tally {
 public:
  Tally(std::string name, std::string relation, double limit) {
    c_.name = std::move(name);
    c_.relation = std::move(relation);
    c_.limit = limit;
    c_.observed = c_.relation == ">=" ? std::numeric_limits<double>::infinity()
                                      : (c_.relation == "count" ? 0.0 : -std::numeric_limits<double>::infinity());
  }

  /// Records a measured value; the comparison against the limit decides pass.
  void value(double v, const std::function<std::string()>& context) {
    bool ok = false;
    if (c_.relation == "<=") {
      ok = v <= c_.limit;
      c_.observed = std::max(c_.observed, v);
    } else if (c_.relation == "<") {
      ok = v < c_.limit;
      c_.observed = std::max(c_.observed, v);
    } else {
      ok = v >= c_.limit;
      c_.observed = std::min(c_.observed, v);
    }
    if (std::isnan(v)) ok = false;
    tick(ok, context);
  }

  /// Records a yes/no outcome for a "count" check.
  void outcome(bool ok, const std::function<std::string()>& context) {
    if (!ok) c_.observed += 1.0;
    tick(ok, context);
  }

  /// Records a case that could not be measured (an exception, a missing orbit).
  void broken(const std::string& context) {
    if (c_.relation == "count") c_.observed += 1.0;
    tick(false, [&] { return context; });
  }

  Check done() {
    c_.passed = c_.cases > 0 && c_.failures == 0;
    if (c_.cases == 0) c_.detail = "no cases measured";
    if (!std::isfinite(c_.observed)) c_.observed = c_.relation == ">=" ? c_.limit : 0.0;
    return c_;
  }

 private:
  void tick(bool ok, const std::function<std::string()>& context) {
    ++c_.cases;
    if (!ok) {
      if (c_.failures == 0) c_.detail = context();
      ++c_.failures;
    }
  }

  Check c_;
};

struct Context {
  Rng rng;
  const VerifyOptions& opts;

  long scaled(long n) const { return std::max(1L, std::lround(static_cast<double>(n) * opts.scale)); }
};

std::vector<double> zeros(int s) { return std::vector<double>(static_cast<std::size_t>(s), 0.0); }

/// Fixed point of the block map, collapsed to its prime period.
PeriodicOrbit block_orbit(const BlockSystem& system, std::vector<double> seed, bool force = false) {
  const BlockMap map(system);
  SolveOptions so;
  so.tol = kSolveTol;
  so.force = force;
  const FixedPointResult fp = solve_fixed_point(map, seed, so);
  return extract_periodic_orbit(fp.x_star, system.P, kExtractTol);
}

std::string orbit_text(const PeriodicOrbit& o) {
  return "period " + std::to_string(o.period) + " values " + values(o.phase_values) + " anchored at n = " +
         std::to_string(o.first_index);
}

// ---------------------------------------------------------------------------

SuiteResult rank_nonexpansive(Context& cx) {
  SuiteResult r{"rank_nonexpansive", "|R_k(x) - R_k(y)| <= ||x - y||_inf for random pairs, dims 1-10, every k", 0,
                {}, {}};
  Tally bound("|R_k(x) - R_k(y)| - ||x - y||_inf", "<=", 0.0);
  Tally order("k_rank equals the k-th entry of the descending sort", "count", 0.0);
  const long pairs = cx.scaled(100'000);
  std::vector<double> x;
  std::vector<double> y;
  for (long i = 0; i < pairs; ++i) {
    const auto d = static_cast<std::size_t>(cx.rng.integer(1, 10));
    const long mode = cx.rng.integer(0, 2);
    x.assign(d, 0.0);
    y.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      if (mode == 0) {
        x[j] = cx.rng.uniform(-10.0, 10.0);
        y[j] = cx.rng.uniform(-10.0, 10.0);
      } else if (mode == 1) {
        x[j] = static_cast<double>(cx.rng.integer(-3, 3));
        y[j] = static_cast<double>(cx.rng.integer(-3, 3));
      } else {
        x[j] = cx.rng.uniform(-10.0, 10.0);
        y[j] = cx.rng.coin() ? x[j] : x[j] + cx.rng.uniform(-1e-3, 1e-3);
      }
    }
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double dist = sup_distance(x, y);
    for (std::size_t k = 1; k <= d; ++k) {
      const double rx = k_rank(x, RankIndex(static_cast<int>(k)));
      const double ry = k_rank(y, RankIndex(static_cast<int>(k)));
      const double gap = std::abs(rx - ry);
      bound.value(gap - dist, [&] {
        return "k = " + std::to_string(k) + ", x = " + values(x) + ", y = " + values(y) + ": |R_k(x) - R_k(y)| = " +
               fmt(gap) + " > " + fmt(dist);
      });
      order.outcome(rx == sorted[k - 1], [&] { return "k = " + std::to_string(k) + ", x = " + values(x); });
    }
  }
  r.instances = pairs;
  r.checks = {bound.done(), order.done()};
  return r;
}

SuiteResult block_direct(Context& cx) {
  SuiteResult r{"block_direct", "block-map iterates agree with direct simulation (M, P <= 4, 50 block steps)", 0, {}, {}};
  Tally dev("max |F^m(y) - direct block|", "<=", 1e-13);
  const long count = cx.scaled(50);
  constexpr long kBlocks = 50;
  for (long i = 0; i < count; ++i) {
    const int M = static_cast<int>(cx.rng.integer(1, 4));
    const int P = static_cast<int>(cx.rng.integer(1, 4));
    const bool use_mmr = i % 5 == 4 && P <= M;
    BlockSystem block;
    Trajectory direct;
    const InitialCondition init = gen::seed(cx.rng, M);
    const long s = static_cast<long>(P) * M;
    const long steps = (kBlocks + 1) * s;
    std::string label;
    try {
      if (use_mmr) {
        RankSystem base = gen::mixed_rank_system(cx.rng, M, 1, 0.9);
        block = max_minus_rank_system(base.family, P);
        direct = iterate(block, init, steps);
        label = "max-minus-rank M = " + std::to_string(M) + ", P = " + std::to_string(P);
      } else {
        const RankSystem rs = gen::mixed_rank_system(cx.rng, M, P, 0.9);
        block = rank_family_to_block(rs.family, rs.schedule);
        direct = iterate(rs, init, steps);
        label = "rank system M = " + std::to_string(M) + ", P = " + std::to_string(P);
      }
      const BlockMap map(block);
      std::vector<double> y(direct.values.begin(), direct.values.begin() + s);
      double worst = 0.0;
      for (long m = 1; m <= kBlocks; ++m) {
        y = map.apply(y);
        for (long j = 0; j < s; ++j) worst = std::max(worst, std::abs(y[j] - direct.values[m * s + j]));
      }
      dev.value(worst, [&] { return label + ", seed " + values(init.values) + ": deviation " + fmt(worst); });
    } catch (const std::exception& e) {
      dev.broken(label + ": " + e.what());
    }
  }
  r.instances = count;
  r.checks = {dev.done()};
  return r;
}

SuiteResult periodic_limit(Context& cx) {
  SuiteResult r{"periodic_limit",
                "random affine rank systems (M <= 5, P <= 6, |A| < 0.9, random k) converge to one orbit whose "
                "prime period divides P",
                0,
                {}, {}};
  Tally divides("detected prime period divides P", "count", 0.0);
  Tally spread("inter-seed orbit sup-distance", "<=", 1e-8);
  Tally oracle("simulated orbit vs block-map fixed point", "<=", 10.0 * kDetectTol);
  const long count = cx.scaled(200);
  for (long i = 0; i < count; ++i) {
    const int M = static_cast<int>(cx.rng.integer(1, 5));
    const int P = static_cast<int>(cx.rng.integer(1, 6));
    const RankSystem rs = gen::affine_rank_system(cx.rng, M, P, 0.9);
    const std::vector<InitialCondition> seeds{gen::seed(cx.rng, M), gen::seed(cx.rng, M)};
    const std::string label = "instance " + std::to_string(i) + " (M = " + std::to_string(M) +
                              ", P = " + std::to_string(P) + ")";
    try {
      const ConvergenceReport rep = convergence_report(rs, seeds, kSteps, kDetectTol);
      for (const auto& so : rep.seeds) {
        if (!so.orbit) {
          divides.broken(label + ": no period <= " + std::to_string(rep.p_max) + " detected");
          continue;
        }
        divides.outcome(P % so.orbit->period == 0,
                        [&] { return label + ": detected period " + std::to_string(so.orbit->period); });
      }
      if (const auto d = rep.max_distance()) {
        spread.value(*d, [&] { return label + ": distance " + fmt(*d); });
      } else {
        spread.broken(label + ": distance undefined");
      }
      if (rep.seeds[0].orbit) {
        const PeriodicOrbit bo = block_orbit(rank_family_to_block(rs.family, rs.schedule), zeros(P * M));
        const double d = aligned_distance(*rep.seeds[0].orbit, bo);
        oracle.value(d, [&] {
          return label + ": simulation " + orbit_text(*rep.seeds[0].orbit) + " vs block map " + orbit_text(bo);
        });
      }
    } catch (const std::exception& e) {
      divides.broken(label + ": " + e.what());
    }
  }
  r.instances = count;
  r.checks = {divides.done(), spread.done(), oracle.done()};
  return r;
}

SuiteResult autonomous_closed_form(Context& cx) {
  SuiteResult r{"autonomous_closed_form",
                "autonomous families: lim x_n = k-rank of the individual fixed points", 0, {}, {}};
  Tally sim("closed form vs simulated limit", "<=", 1e-9);
  Tally blk("closed form vs block-map fixed point", "<=", 1e-9);
  Tally one("detected period is 1", "count", 0.0);
  const long count = cx.scaled(100);
  for (long i = 0; i < count; ++i) {
    const int M = static_cast<int>(cx.rng.integer(1, 5));
    const int k = static_cast<int>(cx.rng.integer(1, M));
    std::vector<std::vector<expr::ScalarExpr>> grid;
    std::vector<ScalarFn> fns;
    std::vector<std::string> texts;
    for (int j = 0; j < M; ++j) {
      texts.push_back(gen::contraction(cx.rng, gen::slope(cx.rng, 0.9)));
      grid.push_back({expr::parse_scalar(texts.back())});
      fns.push_back(as_function(grid.back().front()));
    }
    RankSystem rs{ScalarFamily(M, 1, std::move(grid)), RankSchedule::constant(k, 1)};
    const InitialCondition init = gen::seed(cx.rng, M);
    const auto label = [&] {
      std::string s = "k = " + std::to_string(k) + ", f = {";
      for (std::size_t j = 0; j < texts.size(); ++j) s += (j ? "; " : "") + texts[j];
      return s + "}";
    };
    try {
      const double closed = autonomous_rank_limit(fns, RankIndex(k));
      const Trajectory t = iterate(rs, init, kSteps);
      const auto orbit = detect_period(t, 4, kDetectTol);
      if (!orbit) {
        one.broken(label() + ": no period detected");
        sim.broken(label() + ": no period detected");
      } else {
        one.outcome(orbit->period == 1, [&] { return label() + ": period " + std::to_string(orbit->period); });
        const double d = std::abs(orbit->phase_values.back() - closed);
        sim.value(d, [&] { return label() + ": closed " + fmt(closed) + ", simulated " + orbit_text(*orbit); });
      }
      certify_family(rs.family, DomainInterval{});
      const PeriodicOrbit bo = block_orbit(rank_family_to_block(rs.family, rs.schedule), zeros(M));
      const double d = std::abs(bo.phase_values.front() - closed);
      blk.value(d, [&] { return label() + ": closed " + fmt(closed) + ", block map " + orbit_text(bo); });
    } catch (const std::exception& e) {
      sim.broken(label() + ": " + e.what());
    }
  }
  r.instances = count;
  r.checks = {sim.done(), blk.done(), one.done()};
  return r;
}

SuiteResult p2m2_closed_form(Context& cx) {
  SuiteResult r{"p2m2_closed_form",
                "period-two max-type systems: closed-form orbit vs block map and simulation", 0, {}, {}};
  Tally blk("closed form vs block-map orbit", "<=", 1e-9);
  Tally sim("closed form vs simulated orbit", "<=", 1e-9);
  Tally excluded("excluded case combination observed", "count", 0.0);
  Tally divides("detected prime period divides 2", "count", 0.0);
  std::array<long, 4> rows{};
  long ties = 0;
  const long count = cx.scaled(100);
  for (long i = 0; i < count; ++i) {
    std::array<std::string, 4> texts;  // f1, f2, g1, g2
    for (auto& t : texts) t = gen::contraction(cx.rng, gen::slope(cx.rng, 0.9));
    std::array<expr::ScalarExpr, 4> e;
    for (std::size_t j = 0; j < 4; ++j) e[j] = expr::parse_scalar(texts[j]);
    const auto label = [&] {
      return "f1 = " + texts[0] + ", f2 = " + texts[1] + ", g1 = " + texts[2] + ", g2 = " + texts[3];
    };
    try {
      const P2M2Orbit closed =
          p2m2_max_orbit(as_function(e[0]), as_function(e[1]), as_function(e[2]), as_function(e[3]));
      ++rows[static_cast<std::size_t>(closed.table_row - 1)];
      ties += closed.tie_r1_r3 || closed.tie_r2_r4;
      excluded.outcome(!closed.excluded_combination, [&] { return label(); });
      const PeriodicOrbit co = closed.orbit();

      RankSystem rs{ScalarFamily(2, 2, {{e[2], e[0]}, {e[3], e[1]}}), RankSchedule::constant(1, 2)};
      certify_family(rs.family, DomainInterval{});
      const PeriodicOrbit bo = block_orbit(rank_family_to_block(rs.family, rs.schedule), zeros(4));
      blk.value(aligned_distance(co, bo), [&] { return label() + ": closed " + orbit_text(co) + ", block " +
                                                       orbit_text(bo); });

      const Trajectory t = iterate(rs, gen::seed(cx.rng, 2), kSteps);
      const auto so = detect_period(t, 8, kDetectTol);
      if (!so) {
        divides.broken(label() + ": no period detected");
        sim.broken(label() + ": no period detected");
      } else {
        divides.outcome(2 % so->period == 0, [&] { return label() + ": period " + std::to_string(so->period); });
        sim.value(aligned_distance(co, *so),
                  [&] { return label() + ": closed " + orbit_text(co) + ", simulated " + orbit_text(*so); });
      }
    } catch (const std::exception& ex) {
      blk.broken(label() + ": " + ex.what());
    }
  }
  r.instances = count;
  r.checks = {blk.done(), sim.done(), excluded.done(), divides.done()};
  r.notes.push_back("case rows hit: (r1,r2) " + std::to_string(rows[0]) + ", (r3,r4) " + std::to_string(rows[1]) +
                    ", (r1,r4) " + std::to_string(rows[2]) + ", (r3,r2) " + std::to_string(rows[3]));
  r.notes.push_back("instances with a tie: " + std::to_string(ties));
  return r;
}

SuiteResult power_law_closed_form(Context& cx) {
  SuiteResult r{"power_law_closed_form",
                "x_n = max{A x_{n-1}^a1, A x_{n-2}^a2} with P = 2: explicit limit vs the log-system solver", 0, {}, {}};
  Tally general("explicit formula vs exp(log-system limit), relative", "<=", 1e-9);
  Tally degenerate("equal-column case vs max{A1^(1/(1-a1)), A2^(1/(1-a2))}, relative", "<=", 1e-9);
  Tally flat("three-term form vs explicit formula for a1 >= 0, relative", "<=", 1e-9);
  long flat_mismatch_negative = 0;
  long negative = 0;
  const long count = cx.scaled(100);
  const auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); };
  for (long i = 0; i < count; ++i) {
    Matrix A(2, std::vector<double>(2));
    for (auto& row : A) {
      for (double& v : row) v = std::exp(cx.rng.uniform(-1.5, 1.5));
    }
    const double a1 = cx.rng.uniform(-0.9, 0.9);
    const double a2 = cx.rng.uniform(-0.9, 0.9);
    const auto label = [&] {
      return "A = [" + values(A[0]) + ", " + values(A[1]) + "], alphas = (" + fmt(a1) + ", " + fmt(a2) + ")";
    };
    try {
      const PowerLimit lim = power_max_p2m2_limit(A, a1, a2);
      const RankSystem rs = power_max_system(A, {a1, a2}, PowerTransform::Log);
      const PeriodicOrbit bo = block_orbit(rank_family_to_block(rs.family, rs.schedule), zeros(4));
      const double odd = std::exp(bo.at(1));
      const double even = std::exp(bo.at(2));
      const double e = std::max(rel(lim.x_odd, odd), rel(lim.x_even, even));
      general.value(e, [&] {
        return label() + ": formula (" + fmt(lim.x_odd) + ", " + fmt(lim.x_even) + "), solver (" + fmt(odd) +
               ", " + fmt(even) + ")";
      });

      const PowerLimit three = power_max_p2m2_three_term(A, a1, a2);
      const double e3 = std::max(rel(three.x_odd, lim.x_odd), rel(three.x_even, lim.x_even));
      if (a1 >= 0.0) {
        flat.value(e3, [&] { return label() + ": three-term differs by " + fmt(e3); });
      } else {
        ++negative;
        flat_mismatch_negative += e3 > 1e-9;
      }

      const Matrix D{{A[0][0], A[0][1]}, {A[0][0], A[0][1]}};
      const PowerLimit dl = power_max_p2m2_limit(D, a1, a2);
      const double expect = std::max(std::pow(A[0][0], 1.0 / (1.0 - a1)), std::pow(A[0][1], 1.0 / (1.0 - a2)));
      const double ed = std::max(rel(dl.x_odd, expect), rel(dl.x_even, expect));
      degenerate.value(ed, [&] { return label() + ": equal columns give " + fmt(dl.x_odd) + " vs " + fmt(expect); });
    } catch (const std::exception& ex) {
      general.broken(label() + ": " + ex.what());
    }
  }
  r.instances = count;
  r.checks = {general.done(), degenerate.done(), flat.done()};
  r.notes.push_back("three-term form off by more than 1e-9 in " + std::to_string(flat_mismatch_negative) + " of " +
                    std::to_string(negative) + " instances with a1 < 0");
  return r;
}

SuiteResult counterexamples(Context& cx) {
  SuiteResult r{"counterexamples", "non-contractive systems: a period-3 orbit with P = 1 and the tent map", 0, {}, {}};
  Tally prefix("x_n = max{-x_{n-1}, -x_{n-2}} from (1, 2) gives (1, 2, -1, 1, 1, -1, 1, 1, -1)", "count", 0.0);
  Tally three("period-3 system: detected period", "count", 0.0);
  Tally tent("tent map: no period <= 64 detected over 10^4 steps", "count", 0.0);
  Tally flags("Lipschitz bound of both systems", ">=", 1.0);

  RankSystem p3{ScalarFamily(2, 1, {{expr::parse_scalar("-x")}, {expr::parse_scalar("-x")}}),
                RankSchedule::constant(1, 1)};
  const Trajectory t3 = iterate(p3, InitialCondition{{1.0, 2.0}}, kSteps);
  const std::vector<double> expect{1, 2, -1, 1, 1, -1, 1, 1, -1};
  const std::vector<double> head(t3.values.begin(), t3.values.begin() + 9);
  prefix.outcome(head == expect, [&] { return "got " + values(head); });
  const auto o3 = detect_period(t3, 4, kDetectTol);
  three.outcome(o3 && o3->period == 3, [&] {
    return o3 ? "detected period " + std::to_string(o3->period) : std::string("no period detected");
  });

  RankSystem tm{ScalarFamily(1, 1, {{expr::parse_scalar("max(1 - 2*x, 2*x - 1)")}}), RankSchedule::constant(1, 1)};
  for (int i = 0; i < 3; ++i) {
    const InitialCondition init{{cx.rng.uniform(0.0, 1.0)}};
    const Trajectory tt = iterate(tm, init, kSteps);
    const auto ot = detect_period(tt, 64, kDetectTol);
    tent.outcome(!ot, [&] {
      return "seed " + fmt(init.values[0]) + ": detected period " + std::to_string(ot->period) + " from n = " +
             std::to_string(ot->onset) + " with value(s) " + values(ot->phase_values);
    });
  }

  for (auto* sys : {&p3, &tm}) {
    const FamilyCertificate fc = certify_family(sys->family, DomainInterval{});
    flags.value(fc.overall.bound, [&] { return "bound " + fmt(fc.overall.bound) + " certified"; });
  }
  r.instances = 4;
  r.checks = {prefix.done(), three.done(), tent.done(), flags.done()};
  return r;
}

SuiteResult max_minus_rank(Context& cx) {
  SuiteResult r{"max_minus_rank",
                "x_n = (max f_i - k_n-rank f_i) / 2 with cycling k, P <= M <= 5: periodic limit dividing P", 0, {}, {}};
  Tally divides("detected prime period divides P", "count", 0.0);
  Tally agree("block-map orbit vs simulation", "<=", 1e-8);
  const long count = cx.scaled(20);
  for (long i = 0; i < count; ++i) {
    const int M = static_cast<int>(cx.rng.integer(1, 5));
    const int P = static_cast<int>(cx.rng.integer(1, M));
    const RankSystem base = gen::mixed_rank_system(cx.rng, M, 1, 0.9);
    const std::string label = "instance " + std::to_string(i) + " (M = " + std::to_string(M) +
                              ", P = " + std::to_string(P) + ")";
    try {
      const BlockSystem bs = max_minus_rank_system(base.family, P);
      const Trajectory t = iterate(bs, gen::seed(cx.rng, M), kSteps);
      const auto so = detect_period(t, 4 * P, kDetectTol);
      if (!so) {
        divides.broken(label + ": no period detected");
        continue;
      }
      divides.outcome(P % so->period == 0, [&] { return label + ": period " + std::to_string(so->period); });
      const PeriodicOrbit bo = block_orbit(bs, zeros(P * M));
      agree.value(aligned_distance(*so, bo),
                  [&] { return label + ": simulated " + orbit_text(*so) + ", block " + orbit_text(bo); });
    } catch (const std::exception& e) {
      divides.broken(label + ": " + e.what());
    }
  }
  r.instances = count;
  r.checks = {divides.done(), agree.done()};
  return r;
}

SuiteResult contraction_sides(Context& cx) {
  SuiteResult r{"contraction_sides", "for a contraction f with fixed point r: x > r implies f(x) < x, x < r implies "
                                  "f(x) > x",
                0, {}, {}};
  Tally above("max f(x) - x over x > r", "<", 0.0);
  Tally below("max x - f(x) over x < r", "<", 0.0);
  const long count = cx.scaled(100);
  for (long i = 0; i < count; ++i) {
    const std::string text = gen::contraction(cx.rng, gen::slope(cx.rng, 0.9));
    const expr::ScalarExpr f = expr::parse_scalar(text);
    const double root = scalar_fixed_point(f);
    for (int j = 0; j < 100; ++j) {
      const double off = std::pow(10.0, cx.rng.uniform(-4.0, 1.0));
      const double xa = root + off;
      const double xb = root - off;
      const double va = expr::eval(f, xa, 1) - xa;
      const double vb = xb - expr::eval(f, xb, 1);
      above.value(va, [&] { return "f = " + text + ", r = " + fmt(root) + ", x = " + fmt(xa); });
      below.value(vb, [&] { return "f = " + text + ", r = " + fmt(root) + ", x = " + fmt(xb); });
    }
  }
  r.instances = count;
  r.checks = {above.done(), below.done()};
  return r;
}

SuiteResult p2m2_exclusion(Context& cx) {
  SuiteResult r{"p2m2_exclusion", "if r1 < r3 and r2 < r4 then f1(r4) < r3 or g1(r3) < r4", 0, {}, {}};
  Tally excl("max over instances of min{f1(r4) - r3, g1(r3) - r4}", "<", 0.0);
  const long want = cx.scaled(100);
  long accepted = 0;
  long attempts = 0;
  while (accepted < want && attempts < 1000 * want) {
    ++attempts;
    std::array<std::string, 4> texts;  // f1, f2, g1, g2
    for (auto& t : texts) t = gen::contraction(cx.rng, gen::slope(cx.rng, 0.9));
    std::array<ScalarFn, 4> fn;
    for (std::size_t j = 0; j < 4; ++j) fn[j] = as_function(expr::parse_scalar(texts[j]));
    const P2M2Orbit o = p2m2_max_orbit(fn[0], fn[1], fn[2], fn[3]);
    if (!(o.r1 < o.r3 && o.r2 < o.r4)) continue;
    ++accepted;
    const double v = std::min(fn[0](o.r4) - o.r3, fn[2](o.r3) - o.r4);
    excl.value(v, [&] {
      return "f1 = " + texts[0] + ", f2 = " + texts[1] + ", g1 = " + texts[2] + ", g2 = " + texts[3];
    });
  }
  r.instances = accepted;
  r.checks = {excl.done()};
  r.notes.push_back("accepted " + std::to_string(accepted) + " of " + std::to_string(attempts) + " draws");
  return r;
}

SuiteResult empirical_contraction(Context& cx) {
  SuiteResult r{"empirical_contraction", "fitted per-step rate <= alpha + 0.05 on affine max systems with M = 1", 0,
                {}, {}};
  Tally rate("fitted rate minus (alpha + 0.05)", "<=", 0.0);
  long unfitted = 0;
  const long count = cx.scaled(50);
  for (long i = 0; i < count; ++i) {
    const int P = static_cast<int>(cx.rng.integer(1, 4));
    const RankSystem rs = gen::affine_rank_system(cx.rng, 1, P, 0.9);
    const std::vector<InitialCondition> seeds{gen::seed(cx.rng, 1), gen::seed(cx.rng, 1)};
    try {
      const ConvergenceReport rep = convergence_report(rs, seeds, kSteps, kDetectTol);
      if (!rep.rate) {
        ++unfitted;
        continue;
      }
      const double alpha = rep.alpha.value_or(1.0);
      rate.value(*rep.rate - (alpha + 0.05),
                 [&] { return "P = " + std::to_string(P) + ": rate " + fmt(*rep.rate) + ", alpha " + fmt(alpha); });
    } catch (const std::exception& e) {
      rate.broken(std::string("P = ") + std::to_string(P) + ": " + e.what());
    }
  }
  r.instances = count;
  r.checks = {rate.done()};
  r.notes.push_back("instances converging too fast to fit a rate: " + std::to_string(unfitted));
  return r;
}

SuiteResult system_suite(Context& cx) {
  const VerifyOptions& opts = cx.opts;
  if (!opts.system) throw ArgumentError("the system suite needs a system definition");
  SystemDefinition def = *opts.system;
  SuiteResult r{"system", "checks on '" + def.name + "'", 0, {}, {}};
  Tally cert("certified Lipschitz bound", "<", 1.0);
  Tally divides("detected prime period divides P", "count", 0.0);
  Tally spread("inter-seed orbit sup-distance", "<=", 1e-8);
  Tally oracle("simulated orbit vs block-map fixed point", "<=", 1e-8);

  const SystemCertificate sc = certify_definition(def);
  cert.value(sc.overall.bound, [&] { return "bound " + fmt(sc.overall.bound) + " (" + to_string(sc.overall.method) +
                                            ")"; });
  if (!def.certified() && !opts.force) {
    r.checks = {cert.done()};
    r.notes.push_back("remaining checks skipped: system is not certified (use --force)");
    return r;
  }
  const int M = def.M;
  const int P = def.P;
  std::vector<InitialCondition> seeds{InitialCondition{std::vector<double>(static_cast<std::size_t>(M),
                                                                           def.default_seed_value())}};
  for (int i = 0; i < 2; ++i) {
    InitialCondition s = gen::seed(cx.rng, M, def.domain.lo, def.domain.hi);
    if (def.positive_state()) {
      for (double& v : s.values) v = std::exp(v);
    }
    seeds.push_back(std::move(s));
  }
  try {
    const ConvergenceReport rep = def.rank ? convergence_report(*def.rank, seeds, kSteps, kDetectTol)
                                           : convergence_report(def.block, seeds, kSteps, kDetectTol);
    for (const auto& so : rep.seeds) {
      if (!so.orbit) {
        divides.broken("seed " + values(so.seed.values) + ": no period <= " + std::to_string(rep.p_max));
        continue;
      }
      divides.outcome(P % so.orbit->period == 0, [&] {
        return "seed " + values(so.seed.values) + ": detected period " + std::to_string(so.orbit->period);
      });
    }
    if (const auto d = rep.max_distance()) {
      spread.value(*d, [&] { return "distance " + fmt(*d); });
    } else {
      spread.broken("distance undefined");
    }
    if (rep.seeds[0].orbit) {
      std::vector<double> y(static_cast<std::size_t>(P * M), def.default_seed_value());
      const PeriodicOrbit bo = block_orbit(def.block, y, opts.force);
      const double d = aligned_distance(*rep.seeds[0].orbit, bo);
      oracle.value(d, [&] { return "simulation " + orbit_text(*rep.seeds[0].orbit) + ", block " + orbit_text(bo); });
    } else {
      oracle.broken("no simulated orbit to compare");
    }
  } catch (const std::exception& e) {
    oracle.broken(e.what());
  }
  r.instances = static_cast<long>(seeds.size());
  r.checks = {cert.done(), divides.done(), spread.done(), oracle.done()};
  return r;
}

}  // namespace

SuiteResult run_suite(const std::string& name, const VerifyOptions& opts) {
  Context cx{Rng(opts.rng_seed ^ fnv1a(name)), opts};
  if (name == "rank_nonexpansive") return rank_nonexpansive(cx);
  if (name == "block_direct") return block_direct(cx);
  if (name == "periodic_limit") return periodic_limit(cx);
  if (name == "autonomous_closed_form") return autonomous_closed_form(cx);
  if (name == "p2m2_closed_form") return p2m2_closed_form(cx);
  if (name == "power_law_closed_form") return power_law_closed_form(cx);
  if (name == "counterexamples") return counterexamples(cx);
  if (name == "max_minus_rank") return max_minus_rank(cx);
  if (name == "contraction_sides") return contraction_sides(cx);
  if (name == "p2m2_exclusion") return p2m2_exclusion(cx);
  if (name == "empirical_contraction") return empirical_contraction(cx);
  if (name == "system") return system_suite(cx);
  throw ArgumentError("unknown suite '" + name + "'");
}

}  // namespace rankrec
