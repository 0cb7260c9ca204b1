#include "rankrec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rankrec/block_map.hpp"
#include "rankrec/closed_form.hpp"
#include "rankrec/errors.hpp"
#include "rankrec/random.hpp"
#include "rankrec/simulate.hpp"
#include "rankrec/system_file.hpp"
#include "rankrec/verify.hpp"

namespace rankrec::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultRngSeed = 20'240'101;
constexpr long kDefaultSteps = 10'000;
constexpr double kDefaultDetectTol = defaults::kDetectTol;
constexpr double kDefaultSolveTol = 1e-12;
constexpr double kDefaultClosedFormTol = 1e-9;
constexpr int kSolveMaxIter = 10'000;

struct Config {
  std::string system_path;
  std::vector<double> seed_values;
  long seeds = 0;
  long steps = kDefaultSteps;
  std::optional<double> tol;
  int pmax = 0;
  bool force = false;
  std::uint64_t rng_seed = kDefaultRngSeed;
  std::string out_path;
  std::vector<std::string> suites;
};

/// Raised for invalid flag combinations found after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when closed-form is asked about a shape it does not cover.
class UnsupportedShape : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double tolerance(const Config& cfg, double builtin) {
  if (cfg.tol) {
    if (!(*cfg.tol > 0.0) || !std::isfinite(*cfg.tol)) throw UsageError("--tol must be a positive number");
    return *cfg.tol;
  }
  return tolerance_from_env().value_or(builtin);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

json estimate_json(const LipschitzEstimate& e) {
  json j;
  j["bound"] = e.bound;
  j["method"] = to_string(e.method);
  j["contractive"] = e.contractive();
  j["samples"] = e.samples;
  j["safety_factor"] = e.safety_factor;
  j["window"] = e.window ? json::array({e.window->lo, e.window->hi}) : json(nullptr);
  j["note"] = e.note;
  return j;
}

json orbit_json(const PeriodicOrbit& o) {
  json j;
  j["period"] = o.period;
  j["phase_values"] = o.phase_values;
  j["first_index"] = o.first_index;
  j["onset"] = o.onset;
  j["residual"] = o.residual;
  return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json matrix_json(const std::vector<std::vector<std::optional<double>>>& m) {
  json rows = json::array();
  for (const auto& row : m) {
    json r = json::array();
    for (const auto& v : row) r.push_back(optional_json(v));
    rows.push_back(std::move(r));
  }
  return rows;
}

json report_header(const char* command, const Config& cfg) {
  json j;
  j["schema"] = std::string(kReportSchema);
  j["command"] = command;
  j["rng_seed"] = cfg.rng_seed;
  return j;
}

json system_json(const SystemDefinition& def, const Config& cfg) {
  json j;
  j["file"] = cfg.system_path;
  j["name"] = def.name;
  j["source"] = to_string(def.source);
  j["M"] = def.M;
  j["P"] = def.P;
  j["s"] = def.M * def.P;
  j["domain"] = json::array({def.domain.lo, def.domain.hi});
  return j;
}

SystemDefinition load(const Config& cfg) {
  if (cfg.system_path.empty()) throw UsageError("--system FILE is required");
  return load_system_file(cfg.system_path);
}

void require_certified(const SystemDefinition& def, const SystemCertificate& cert, const Config& cfg) {
  if (!def.certified() && !cfg.force) {
    std::ostringstream msg;
    msg << "system '" << def.name << "' is not certified sup-contractive (bound " << cert.overall.bound << ", "
        << to_string(cert.overall.method) << "); rerun with --force to proceed anyway";
    throw CertificationError(msg.str());
  }
}

/// The initial conditions for simulate: explicit values, COUNT random draws,
/// or the default seed.
std::vector<InitialCondition> simulation_seeds(const SystemDefinition& def, const Config& cfg) {
  const auto M = static_cast<std::size_t>(def.M);
  if (!cfg.seed_values.empty()) {
    if (cfg.seed_values.size() != M) {
      throw UsageError("--seed-values needs M = " + std::to_string(M) + " values, got " +
                       std::to_string(cfg.seed_values.size()));
    }
    return {InitialCondition{cfg.seed_values}};
  }
  if (cfg.seeds > 0) {
    Rng rng(cfg.rng_seed);
    std::vector<InitialCondition> out;
    for (long i = 0; i < cfg.seeds; ++i) {
      InitialCondition init;
      for (std::size_t j = 0; j < M; ++j) {
        const double u = rng.uniform(def.domain.lo, def.domain.hi);
        init.values.push_back(def.positive_state() ? std::exp(u) : u);
      }
      out.push_back(std::move(init));
    }
    return out;
  }
  return {InitialCondition{std::vector<double>(M, def.default_seed_value())}};
}

Trajectory run_trajectory(const SystemDefinition& def, const InitialCondition& init, long steps) {
  return def.rank ? iterate(*def.rank, init, steps, def.name) : iterate(def.block, init, steps, def.name);
}

std::string trajectory_csv(const Trajectory& t, int P) {
  std::string s(kCsvVersionLine);
  s += "\nn,x,phase\n";
  char buf[64];
  for (std::size_t i = 0; i < t.size(); ++i) {
    const long n = static_cast<long>(i) + 1;
    std::snprintf(buf, sizeof buf, "%.17g", t.values[i]);
    s += std::to_string(n) + "," + buf + "," + std::to_string(phase_of(n, P)) + "\n";
  }
  return s;
}

void emit(std::ostream& out, const json& report, const Config& cfg, bool copy_to_out) {
  const std::string text = report.dump(2) + "\n";
  if (copy_to_out && !cfg.out_path.empty()) write_text(cfg.out_path, text);
  out << text;
}

// ---------------------------------------------------------------------------

int cmd_simulate(const Config& cfg, std::ostream& out, std::ostream& err) {
  if (!cfg.seed_values.empty() && cfg.seeds > 0) throw UsageError("give either --seed-values or --seeds, not both");
  SystemDefinition def = load(cfg);
  const double tol = tolerance(cfg, kDefaultDetectTol);
  const int pmax = cfg.pmax > 0 ? cfg.pmax : 4 * def.P;
  if (cfg.steps < def.M) throw UsageError("--steps must be at least M = " + std::to_string(def.M));
  const SystemCertificate cert = certify_definition(def);
  require_certified(def, cert, cfg);
  const std::vector<InitialCondition> seeds = simulation_seeds(def, cfg);

  json report = report_header("simulate", cfg);
  report["system"] = system_json(def, cfg);
  report["certificate"] = estimate_json(cert.overall);
  report["settings"] = {{"steps", cfg.steps}, {"tol", tol}, {"pmax", pmax}, {"forced", cfg.force}};

  const Trajectory first = run_trajectory(def, seeds.front(), cfg.steps);
  bool all_detected = true;
  json seed_rows = json::array();
  if (seeds.size() == 1) {
    const auto orbit = detect_period(first, pmax, tol);
    json row{{"initial", seeds.front().values}};
    row["orbit"] = orbit ? orbit_json(*orbit) : json(nullptr);
    row["rate"] = orbit ? optional_json(fit_convergence_rate(first, *orbit)) : json(nullptr);
    all_detected = orbit.has_value();
    seed_rows.push_back(std::move(row));
    report["seeds"] = std::move(seed_rows);
  } else {
    const ConvergenceReport rep = def.rank ? convergence_report(*def.rank, seeds, cfg.steps, tol, pmax)
                                           : convergence_report(def.block, seeds, cfg.steps, tol, pmax);
    for (const auto& so : rep.seeds) {
      json row{{"initial", so.seed.values}};
      row["orbit"] = so.orbit ? orbit_json(*so.orbit) : json(nullptr);
      row["rate"] = optional_json(so.rate);
      all_detected = all_detected && so.orbit.has_value();
      seed_rows.push_back(std::move(row));
    }
    report["seeds"] = std::move(seed_rows);
    json conv;
    conv["distance"] = matrix_json(rep.distance);
    conv["rotation_distance"] = matrix_json(rep.rotation_distance);
    conv["max_distance"] = optional_json(rep.max_distance());
    conv["rate"] = optional_json(rep.rate);
    conv["alpha"] = optional_json(rep.alpha);
    conv["rate_ceiling"] = optional_json(rep.rate_ceiling);
    report["convergence"] = std::move(conv);
  }
  report["csv"] = cfg.out_path.empty() ? json(nullptr) : json(cfg.out_path);
  report["status"] = all_detected ? "ok" : "no-period";

  if (!cfg.out_path.empty()) write_text(cfg.out_path, trajectory_csv(first, def.P));
  emit(out, report, cfg, false);
  if (!all_detected) {
    err << "rank_recur: detection: no period <= " << pmax << " found at tol " << tol << " for at least one seed\n";
    return kNoPeriod;
  }
  return kOk;
}

std::vector<double> solve_seed(const SystemDefinition& def, const Config& cfg) {
  const auto M = static_cast<std::size_t>(def.M);
  const auto s = static_cast<std::size_t>(def.M * def.P);
  std::vector<double> base(M, def.default_seed_value());
  if (!cfg.seed_values.empty()) {
    if (cfg.seed_values.size() == s) return cfg.seed_values;
    if (cfg.seed_values.size() != M) {
      throw UsageError("--seed-values needs M = " + std::to_string(M) + " or s = " + std::to_string(s) +
                       " values, got " + std::to_string(cfg.seed_values.size()));
    }
    base = cfg.seed_values;
  }
  const Trajectory t = run_trajectory(def, InitialCondition{base}, static_cast<long>(s));
  return t.values;
}

int cmd_solve(const Config& cfg, std::ostream& out, std::ostream& err) {
  SystemDefinition def = load(cfg);
  const double tol = tolerance(cfg, kDefaultSolveTol);
  const SystemCertificate cert = certify_definition(def);
  require_certified(def, cert, cfg);
  const std::vector<double> seed = solve_seed(def, cfg);

  json report = report_header("solve", cfg);
  report["system"] = system_json(def, cfg);
  report["certificate"] = estimate_json(cert.overall);
  const double shift_tol = 100.0 * tol;
  report["settings"] = {{"tol", tol}, {"shift_tol", shift_tol}, {"max_iter", kSolveMaxIter}, {"forced", cfg.force}};
  report["seed"] = seed;

  const BlockMap map(def.block);
  SolveOptions so;
  so.tol = tol;
  so.max_iter = kSolveMaxIter;
  so.force = cfg.force;
  FixedPointResult fp;
  try {
    fp = solve_fixed_point(map, seed, so);
  } catch (const ConvergenceError& e) {
    const auto& trace = e.residual_trace();
    const std::size_t keep = std::min<std::size_t>(trace.size(), 8);
    report["fixed_point"] = {{"converged", false},
                             {"iterations", trace.size()},
                             {"residual_trace_tail", std::vector<double>(trace.end() - static_cast<long>(keep),
                                                                         trace.end())}};
    report["status"] = "no-convergence";
    emit(out, report, cfg, true);
    err << "rank_recur: solver: " << e.what() << "\n";
    return kSolverFailed;
  }
  report["fixed_point"] = {{"converged", true},
                           {"iterations", fp.iterations},
                           {"residual", fp.residual},
                           {"contraction_ratio_estimate", fp.contraction_ratio_estimate},
                           {"x_star", fp.x_star}};
  const ShiftReport shift = shift_commutation_check(fp.x_star, def.P, shift_tol);
  report["shift_check"] = {{"passed", shift.passed},
                           {"max_violation", shift.max_violation},
                           {"worst_index", shift.worst_index},
                           {"tol", shift.tol}};
  if (!shift.passed) {
    report["orbit"] = nullptr;
    report["status"] = "shift-check-failed";
    emit(out, report, cfg, true);
    err << "rank_recur: solver: shift check failed (max violation " << shift.max_violation << " at j = "
        << shift.worst_index << ")\n";
    return kSolverFailed;
  }
  report["orbit"] = orbit_json(extract_periodic_orbit(fp.x_star, def.P, shift_tol));
  report["status"] = "ok";
  emit(out, report, cfg, true);
  return kOk;
}

/// Block-map orbit used as the solver reference for closed-form.
PeriodicOrbit solver_orbit(const SystemDefinition& def, bool force) {
  const BlockMap map(def.block);
  SolveOptions so;
  so.tol = kDefaultSolveTol;
  so.force = force;
  const std::vector<double> seed(static_cast<std::size_t>(def.M * def.P), def.default_seed_value());
  const FixedPointResult fp = solve_fixed_point(map, seed, so);
  return extract_periodic_orbit(fp.x_star, def.P, 100.0 * kDefaultSolveTol);
}

int cmd_closed_form(const Config& cfg, std::ostream& out, std::ostream& err) {
  SystemDefinition def = load(cfg);
  const double tol = tolerance(cfg, kDefaultClosedFormTol);
  const bool all_max = def.rank && std::all_of(def.rank->schedule.ks.begin(), def.rank->schedule.ks.end(),
                                                [](int k) { return k == 1; });
  const bool autonomous = def.rank && def.P == 1;
  const bool period_two = all_max && def.M == 2 && def.P == 2;
  if (!autonomous && !period_two) {
    throw UnsupportedShape("closed-form covers autonomous rank systems (P = 1) and max-type systems with M = 2, "
                           "P = 2; '" + def.name + "' has M = " + std::to_string(def.M) + ", P = " +
                           std::to_string(def.P) + ", source " + to_string(def.source));
  }
  const SystemCertificate cert = certify_definition(def);
  require_certified(def, cert, cfg);

  FixedPointOptions fpo;
  fpo.start = def.default_seed_value();
  const ScalarFamily& fam = def.rank->family;
  const auto fn = [&](int i, int phase) { return as_function(fam.at(i, phase), phase); };

  json report = report_header("closed-form", cfg);
  report["system"] = system_json(def, cfg);
  report["certificate"] = estimate_json(cert.overall);
  report["settings"] = {{"tol", tol}, {"forced", cfg.force}};

  PeriodicOrbit formula;
  if (autonomous) {
    const int k = def.rank->schedule.at_phase(1);
    std::vector<ScalarFn> fs;
    json roots = json::array();
    for (int i = 1; i <= def.M; ++i) {
      fs.push_back(fn(i, 1));
      roots.push_back(scalar_fixed_point(fs.back(), fpo));
    }
    const double lim = autonomous_rank_limit(fs, RankIndex(k), fpo);
    formula.period = 1;
    formula.phase_values = {lim};
    report["shape"] = "autonomous-rank";
    report["closed_form"] = {{"k", k}, {"fixed_points", roots}, {"limit", lim}};
  } else {
    // Odd n is phase 1 (g1, g2), even n is phase 2 (f1, f2).
    const P2M2Orbit o = p2m2_max_orbit(fn(1, 2), fn(2, 2), fn(1, 1), fn(2, 1), fpo);
    formula = o.orbit();
    report["shape"] = def.source == SystemDefinition::Source::Power ? "period-two-power" : "period-two-max";
    json cf;
    cf["r"] = {o.r1, o.r2, o.r3, o.r4};
    cf["x_odd"] = o.x_odd;
    cf["x_even"] = o.x_even;
    cf["period"] = o.period;
    cf["case_row"] = o.table_row;
    cf["tie_r1_r3"] = o.tie_r1_r3;
    cf["tie_r2_r4"] = o.tie_r2_r4;
    cf["excluded_combination"] = o.excluded_combination;
    if (def.source == SystemDefinition::Source::Power) {
      const PowerLimit pl = power_max_p2m2_limit(def.power_A, def.power_alphas[0], def.power_alphas[1]);
      const bool log_state = def.transform == PowerTransform::Log;
      cf["power_formula"] = {{"x_odd", pl.x_odd}, {"x_even", pl.x_even}};
      const double d_odd = std::abs((log_state ? std::log(pl.x_odd) : pl.x_odd) - o.x_odd);
      const double d_even = std::abs((log_state ? std::log(pl.x_even) : pl.x_even) - o.x_even);
      cf["power_formula_vs_case_formula"] = std::max(d_odd, d_even);
    }
    report["closed_form"] = std::move(cf);
  }
  const PeriodicOrbit solved = solver_orbit(def, cfg.force);
  const double gap = aligned_distance(formula, solved);
  report["solver"] = orbit_json(solved);
  report["discrepancy"] = gap;
  report["agree"] = gap <= tol;
  report["status"] = gap <= tol ? "ok" : "mismatch";
  emit(out, report, cfg, true);
  if (gap > tol) err << "rank_recur: closed-form: formula and solver differ by " << gap << " (tol " << tol << ")\n";
  return kOk;
}

int cmd_lipschitz(const Config& cfg, std::ostream& out, std::ostream& err) {
  SystemDefinition def = load(cfg);
  CertifySettings settings;
  settings.seed = cfg.rng_seed;
  const SystemCertificate cert = certify_definition(def, settings);

  json report = report_header("lipschitz", cfg);
  report["system"] = system_json(def, cfg);
  report["overall"] = estimate_json(cert.overall);
  json entries = json::array();
  const ScalarFamily* fam = def.rank ? &def.rank->family : (def.base_family ? &*def.base_family : nullptr);
  for (std::size_t i = 0; i < cert.family_entries.size(); ++i) {
    for (std::size_t p = 0; p < cert.family_entries[i].size(); ++p) {
      json e{{"lag", i + 1}, {"phase", p + 1}};
      if (fam) e["function"] = expr::to_string(fam->f[i][p]);
      e["estimate"] = estimate_json(cert.family_entries[i][p]);
      entries.push_back(std::move(e));
    }
  }
  for (std::size_t p = 0; p < cert.block_entries.size(); ++p) {
    json e{{"phase", p + 1}, {"function", expr::to_string(def.block.G[p])}};
    e["estimate"] = estimate_json(cert.block_entries[p]);
    entries.push_back(std::move(e));
  }
  report["entries"] = std::move(entries);
  report["flagged"] = !cert.overall.contractive();
  report["status"] = cert.overall.contractive() ? "ok" : "not-contractive";
  emit(out, report, cfg, true);
  if (!cert.overall.contractive()) {
    err << "rank_recur: certification: bound " << cert.overall.bound << " >= 1\n";
    return kNotCertified;
  }
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  for (const auto& entry : cfg.suites) {
    std::stringstream ss(entry);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (!is_suite(item)) throw UsageError("unknown suite '" + item + "'");
      names.push_back(item);
    }
  }
  std::optional<SystemDefinition> def;
  if (!cfg.system_path.empty()) def = load(cfg);
  if (names.empty()) {
    names = suite_names();
    if (def) names.push_back("system");
  }
  if (std::find(names.begin(), names.end(), "system") != names.end() && !def) {
    throw UsageError("the system suite needs --system FILE");
  }

  VerifyOptions vo;
  vo.rng_seed = cfg.rng_seed;
  vo.force = cfg.force;
  vo.system = def ? &*def : nullptr;

  json report = report_header("verify", cfg);
  if (def) report["system"] = system_json(*def, cfg);
  json suites = json::array();
  int failed = 0;
  for (const auto& name : names) {
    const SuiteResult r = run_suite(name, vo);
    failed += !r.passed();
    err << (r.passed() ? "PASS " : "FAIL ") << name << "\n";
    json s;
    s["name"] = r.name;
    s["description"] = r.description;
    s["passed"] = r.passed();
    s["instances"] = r.instances;
    json checks = json::array();
    for (const auto& c : r.checks) {
      checks.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"observed", c.observed},
                        {"relation", c.relation},
                        {"limit", c.limit},
                        {"cases", c.cases},
                        {"failures", c.failures},
                        {"detail", c.detail}});
    }
    s["checks"] = std::move(checks);
    s["notes"] = r.notes;
    suites.push_back(std::move(s));
  }
  report["suites"] = std::move(suites);
  report["summary"] = {{"suites", names.size()}, {"passed", static_cast<int>(names.size()) - failed},
                       {"failed", failed}};
  report["status"] = failed == 0 ? "ok" : "failed";
  emit(out, report, cfg, true);
  if (failed > 0) {
    err << "rank_recur: verify: " << failed << " of " << names.size() << " suites failed\n";
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace

std::optional<double> tolerance_from_env() {
  const char* raw = std::getenv(kToleranceEnv);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(v) || !(v > 0.0)) {
    throw ArgumentError(std::string(kToleranceEnv) + " must be a positive number, got '" + raw + "'");
  }
  return v;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate, solve and verify periodically forced rank-type recurrences", "rank_recur"};
  app.require_subcommand(1);
  Config cfg;

  const auto add_system = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--system", cfg.system_path, "System definition file (JSON)");
    if (required) opt->required();
  };
  const auto add_tol = [&](CLI::App* sub, const std::string& what) {
    sub->add_option("--tol", cfg.tol, what + " (default overridable via RANK_RECUR_DEFAULT_TOL)");
  };
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--rng-seed", cfg.rng_seed, "Random seed, recorded in the report");
    sub->add_option("--out", cfg.out_path, "Output file");
  };

  auto* sim = app.add_subcommand("simulate", "Iterate the recurrence and detect its period");
  add_system(sim, true);
  auto* sv = sim->add_option("--seed-values", cfg.seed_values, "Initial values x_1,...,x_M")->delimiter(',');
  auto* sc = sim->add_option("--seeds", cfg.seeds, "Number of random initial conditions")->check(CLI::PositiveNumber);
  sv->excludes(sc);
  sim->add_option("--steps", cfg.steps, "Trajectory length N")->check(CLI::PositiveNumber);
  add_tol(sim, "Period detection tolerance, default 1e-9");
  sim->add_option("--pmax", cfg.pmax, "Largest period tried, default 4P")->check(CLI::PositiveNumber);
  sim->add_flag("--force", cfg.force, "Run even if the system is not certified contractive");
  add_common(sim);

  auto* sol = app.add_subcommand("solve", "Find the periodic orbit as the block-map fixed point");
  add_system(sol, true);
  sol->add_option("--seed-values", cfg.seed_values, "Initial x_1..x_M (extended by simulation) or a full block")
      ->delimiter(',');
  add_tol(sol, "Fixed-point tolerance, default 1e-12");
  sol->add_flag("--force", cfg.force, "Iterate even if the system is not certified contractive");
  add_common(sol);

  auto* cf = app.add_subcommand("closed-form", "Compare an explicit limit formula with the solver");
  add_system(cf, true);
  add_tol(cf, "Agreement tolerance, default 1e-9");
  cf->add_flag("--force", cfg.force, "Evaluate even if the system is not certified contractive");
  add_common(cf);

  auto* ver = app.add_subcommand("verify", "Run the property suites");
  add_system(ver, false);
  ver->add_option("--suite", cfg.suites, "Suite name (repeatable or comma-separated); default all");
  ver->add_flag("--force", cfg.force, "Run the system suite on an uncertified system");
  add_common(ver);

  auto* lip = app.add_subcommand("lipschitz", "Estimate Lipschitz constants of a system");
  add_system(lip, true);
  add_common(lip);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(cfg, out, err);
    if (sol->parsed()) return cmd_solve(cfg, out, err);
    if (cf->parsed()) return cmd_closed_form(cfg, out, err);
    if (ver->parsed()) return cmd_verify(cfg, out, err);
    return cmd_lipschitz(cfg, out, err);
  } catch (const UsageError& e) {
    err << "rank_recur: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    err << "rank_recur: io: " << e.what() << "\n";
    return kIoError;
  } catch (const ParseError& e) {
    err << "rank_recur: parse: " << cfg.system_path << ": " << e.what() << "\n";
    return kParseError;
  } catch (const CertificationError& e) {
    err << "rank_recur: certification: " << e.what() << "\n";
    return kNotCertified;
  } catch (const SimulationError& e) {
    err << "rank_recur: numeric: " << e.what() << "\n";
    return kNumericDomain;
  } catch (const NumericDomainError& e) {
    err << "rank_recur: numeric: " << e.what() << "\n";
    return kNumericDomain;
  } catch (const ConvergenceError& e) {
    err << "rank_recur: solver: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const PreconditionError& e) {
    err << "rank_recur: solver: " << e.what() << "\n";
    return kSolverFailed;
  } catch (const UnsupportedShape& e) {
    err << "rank_recur: closed-form: " << e.what() << "\n";
    return kUnsupportedShape;
  } catch (const ArgumentError& e) {
    err << "rank_recur: usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "rank_recur: internal: " << e.what() << "\n";
    return kIoError;
  }
}

}  // namespace rankrec::cli
