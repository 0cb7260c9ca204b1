#include "rankrec/system_file.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rankrec/errors.hpp"

namespace rankrec {

using json = nlohmann::json;

std::string to_string(SystemDefinition::Source s) {
  switch (s) {
    case SystemDefinition::Source::Affine: return "affine";
    case SystemDefinition::Source::Power: return "power";
    case SystemDefinition::Source::Functions: return "functions";
    case SystemDefinition::Source::Block: return "block";
    case SystemDefinition::Source::MaxMinusRank: return "max_minus_rank";
  }
  return "unknown";
}

namespace {

[[noreturn]] void schema_fail(const std::string& msg) { throw ParseError(ParseError::Kind::Schema, msg); }

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) schema_fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

int positive_int(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1'000'000) {
    schema_fail(what + " must be a positive integer");
  }
  return static_cast<int>(v.get<long long>());
}

double real(const json& v, const std::string& what) {
  if (!v.is_number()) schema_fail(what + " must be a number");
  return v.get<double>();
}

Matrix matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& what) {
  if (!v.is_array() || v.size() != rows) {
    schema_fail(what + " must be an array of " + std::to_string(rows) + " rows (P x M)");
  }
  Matrix out;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = v[r];
    if (!row.is_array() || row.size() != cols) {
      schema_fail(what + " row " + std::to_string(r + 1) + " must have " + std::to_string(cols) + " entries");
    }
    std::vector<double> vals;
    for (std::size_t c = 0; c < cols; ++c) {
      vals.push_back(real(row[c], what + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    }
    out.push_back(std::move(vals));
  }
  return out;
}

template <class Fn>
auto with_context(const std::string& where, Fn fn) {
  try {
    return fn();
  } catch (const ParseError& e) {
    throw ParseError(e.kind(), where + ": " + e.what());
  }
}

std::string dsl_string(const json& v, const std::string& where) {
  if (!v.is_string()) schema_fail(where + " must be a string");
  return v.get<std::string>();
}

RankSchedule schedule_from(const json& doc, int M, int P) {
  const bool has_k = doc.contains("k");
  const bool has_sched = doc.contains("schedule");
  if (has_k == has_sched) schema_fail("give exactly one of 'k' or 'schedule'");
  RankSchedule sched;
  if (has_k) {
    sched = RankSchedule::constant(positive_int(doc.at("k"), "k"), P);
  } else {
    const json& s = doc.at("schedule");
    if (!s.is_array()) schema_fail("schedule must be an array of P rank indices");
    for (std::size_t i = 0; i < s.size(); ++i) sched.ks.push_back(positive_int(s[i], "schedule entry"));
  }
  try {
    sched.validate(M, P);
  } catch (const ArgumentError& e) {
    schema_fail(e.what());
  }
  return sched;
}

ScalarFamily family_from(const json& fs, int M, int P, const char* field) {
  if (!fs.is_array() || fs.size() != static_cast<std::size_t>(M)) {
    schema_fail(std::string(field) + " must list M = " + std::to_string(M) + " entries (one per lag)");
  }
  std::vector<std::vector<expr::ScalarExpr>> grid(static_cast<std::size_t>(M));
  for (int i = 0; i < M; ++i) {
    const json& entry = fs[static_cast<std::size_t>(i)];
    const std::string where = std::string(field) + "[" + std::to_string(i) + "]";
    if (entry.is_string()) {
      auto f = with_context(where, [&] { return expr::parse_scalar(entry.get<std::string>()); });
      grid[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(P), f);
    } else if (entry.is_array() && entry.size() == static_cast<std::size_t>(P)) {
      for (int ph = 0; ph < P; ++ph) {
        const std::string w = where + "[" + std::to_string(ph) + "]";
        const std::string src = dsl_string(entry[static_cast<std::size_t>(ph)], w);
        grid[static_cast<std::size_t>(i)].push_back(with_context(w, [&] { return expr::parse_scalar(src); }));
      }
    } else {
      schema_fail(where + " must be a string or an array of P = " + std::to_string(P) + " strings");
    }
  }
  return ScalarFamily(M, P, std::move(grid));
}

}  // namespace

SystemDefinition parse_system(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(ParseError::Kind::Syntax, std::string("system file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_fail("system file must hold a JSON object");

  static const std::set<std::string> kKnown{"schema", "name", "M", "P", "k", "schedule", "domain",
                                            "affine", "power", "functions", "block", "max_minus_rank"};
  for (const auto& item : doc.items()) {
    if (!kKnown.count(item.key())) schema_fail("unknown field '" + item.key() + "'");
  }
  if (doc.contains("schema") && doc.at("schema") != std::string(kSystemSchema)) {
    schema_fail("unsupported schema, expected \"" + std::string(kSystemSchema) + "\"");
  }

  SystemDefinition def;
  def.name = doc.contains("name") && doc.at("name").is_string() ? doc.at("name").get<std::string>() : "unnamed";
  def.M = positive_int(require(doc, "M"), "M");
  def.P = positive_int(require(doc, "P"), "P");
  if (doc.contains("domain")) {
    const json& d = doc.at("domain");
    if (!d.is_array() || d.size() != 2) schema_fail("domain must be [lo, hi]");
    try {
      def.domain = DomainInterval(real(d[0], "domain lo"), real(d[1], "domain hi"));
    } catch (const ArgumentError& e) {
      schema_fail(e.what());
    }
  }

  int sources = 0;
  for (const char* key : {"affine", "power", "functions", "block", "max_minus_rank"}) sources += doc.contains(key);
  if (sources != 1) schema_fail("give exactly one of affine, power, functions, block, max_minus_rank");

  const int M = def.M;
  const int P = def.P;
  try {
    if (doc.contains("affine")) {
      def.source = SystemDefinition::Source::Affine;
      const json& a = doc.at("affine");
      const Matrix A = matrix(require(a, "A"), static_cast<std::size_t>(P), static_cast<std::size_t>(M), "affine.A");
      const Matrix B = matrix(require(a, "B"), static_cast<std::size_t>(P), static_cast<std::size_t>(M), "affine.B");
      const RankSchedule sched = schedule_from(doc, M, P);
      RankSystem rs = affine_matrix_system(A, B, sched.ks.front());
      rs.schedule = sched;
      def.rank = std::move(rs);
    } else if (doc.contains("power")) {
      def.source = SystemDefinition::Source::Power;
      const json& pw = doc.at("power");
      def.power_A = matrix(require(pw, "A"), static_cast<std::size_t>(P), static_cast<std::size_t>(M), "power.A");
      const json& al = require(pw, "alphas");
      if (!al.is_array() || al.size() != static_cast<std::size_t>(M)) schema_fail("power.alphas needs M exponents");
      for (const auto& v : al) def.power_alphas.push_back(real(v, "power.alphas entry"));
      const std::string tr = pw.contains("transform") ? dsl_string(pw.at("transform"), "power.transform") : "log";
      if (tr == "log") {
        def.transform = PowerTransform::Log;
      } else if (tr == "raw") {
        def.transform = PowerTransform::Raw;
      } else {
        schema_fail("power.transform must be \"log\" or \"raw\"");
      }
      if (doc.contains("schedule") || (doc.contains("k") && doc.at("k") != 1)) {
        schema_fail("power systems are max-type (k = 1)");
      }
      def.rank = power_max_system(def.power_A, def.power_alphas, def.transform);
    } else if (doc.contains("functions")) {
      def.source = SystemDefinition::Source::Functions;
      ScalarFamily fam = family_from(doc.at("functions"), M, P, "functions");
      def.rank = RankSystem{std::move(fam), schedule_from(doc, M, P)};
    } else if (doc.contains("block")) {
      def.source = SystemDefinition::Source::Block;
      if (doc.contains("k") || doc.contains("schedule")) schema_fail("block systems take no rank index");
      const json& bs = doc.at("block");
      if (!bs.is_array() || bs.size() != static_cast<std::size_t>(P)) {
        schema_fail("block must list P = " + std::to_string(P) + " update strings");
      }
      std::vector<expr::BlockExpr> updates;
      for (int ph = 0; ph < P; ++ph) {
        const std::string where = "block[" + std::to_string(ph) + "]";
        const std::string src = dsl_string(bs[static_cast<std::size_t>(ph)], where);
        updates.push_back(with_context(where, [&] { return expr::parse_block(src, M); }));
      }
      def.block = BlockSystem(M, P, std::move(updates));
    } else {
      def.source = SystemDefinition::Source::MaxMinusRank;
      if (doc.contains("k") || doc.contains("schedule")) schema_fail("max_minus_rank cycles its own rank index");
      if (P > M) schema_fail("max_minus_rank needs P <= M");
      def.base_family = family_from(doc.at("max_minus_rank"), M, 1, "max_minus_rank");
      def.block = max_minus_rank_system(*def.base_family, P);
    }
  } catch (const ArgumentError& e) {
    schema_fail(e.what());
  }
  if (def.rank) def.block = rank_family_to_block(def.rank->family, def.rank->schedule);
  return def;
}

SystemDefinition load_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open system file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_system(buf.str());
}

SystemCertificate certify_definition(SystemDefinition& def, const CertifySettings& settings) {
  SystemCertificate cert;
  if (def.positive_state()) {
    cert.overall = *def.rank->family.alpha_bound;
  } else if (def.rank) {
    FamilyCertificate fc = certify_family(def.rank->family, def.domain, settings.grid_points, settings.safety_factor);
    cert.overall = fc.overall;
    cert.family_entries = std::move(fc.entries);
  } else if (def.base_family) {
    FamilyCertificate fc = certify_family(*def.base_family, def.domain, settings.grid_points, settings.safety_factor);
    cert.overall = fc.overall;
    cert.family_entries = std::move(fc.entries);
  } else {
    cert.block_entries = certify_block(def.block, def.domain, settings.pairs, settings.seed);
    cert.overall = *def.block.L_bound;
    return cert;
  }
  def.block.L_bound = cert.overall;
  return cert;
}

}  // namespace rankrec
