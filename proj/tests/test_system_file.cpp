#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "rankrec/errors.hpp"
#include "rankrec/system_file.hpp"

using namespace rankrec;

namespace {

const std::filesystem::path kDir = RANKREC_SYSTEMS_DIR;

ParseError parse_error(const std::string& text) {
  try {
    parse_system(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected ParseError for " << text);
  return ParseError(ParseError::Kind::Syntax, "unreachable");
}

}  // namespace

TEST_CASE("every fixture except the malformed one loads") {
  struct Expect {
    const char* file;
    SystemDefinition::Source source;
    int M;
    int P;
  };
  using S = SystemDefinition::Source;
  for (const Expect& e : {Expect{"contraction.json", S::Functions, 1, 1}, Expect{"period3.json", S::Functions, 2, 1},
                          Expect{"tent.json", S::Functions, 1, 1}, Expect{"median_exp_sin.json", S::Functions, 3, 4},
                          Expect{"affine_p2.json", S::Affine, 2, 2}, Expect{"affine_schedule.json", S::Affine, 3, 3},
                          Expect{"power_p2m2_log.json", S::Power, 2, 2}, Expect{"power_p2m2_raw.json", S::Power, 2, 2},
                          Expect{"max_minus_rank.json", S::MaxMinusRank, 3, 2},
                          Expect{"block_max.json", S::Block, 2, 1}}) {
    INFO(e.file);
    const SystemDefinition def = load_system_file(kDir / e.file);
    CHECK(def.source == e.source);
    CHECK(def.M == e.M);
    CHECK(def.P == e.P);
    CHECK(def.block.M == e.M);
    CHECK(def.block.P == e.P);
    CHECK(def.block.G.size() == static_cast<std::size_t>(e.P));
    CHECK(def.rank.has_value() == (e.source != S::Block && e.source != S::MaxMinusRank));
  }
}

TEST_CASE("fixture contents") {
  const SystemDefinition tent = load_system_file(kDir / "tent.json");
  CHECK(tent.domain == DomainInterval(0, 1));
  CHECK(tent.name == "tent-map");

  const SystemDefinition sched = load_system_file(kDir / "affine_schedule.json");
  REQUIRE(sched.rank);
  CHECK(sched.rank->schedule.ks == std::vector<int>{1, 2, 3});

  const SystemDefinition raw = load_system_file(kDir / "power_p2m2_raw.json");
  CHECK(raw.positive_state());
  CHECK(raw.default_seed_value() == 1.0);
  CHECK(raw.transform == PowerTransform::Raw);
  CHECK(raw.power_alphas == std::vector<double>{-0.4, 0.6});
  const SystemDefinition lg = load_system_file(kDir / "power_p2m2_log.json");
  CHECK_FALSE(lg.positive_state());
  CHECK(lg.power_A == raw.power_A);
}

TEST_CASE("certification per source") {
  SystemDefinition contraction = load_system_file(kDir / "contraction.json");
  CHECK_FALSE(contraction.certified());
  const SystemCertificate c = certify_definition(contraction);
  CHECK(c.overall.bound == 0.5);
  CHECK(contraction.certified());
  CHECK(contraction.rank->family.certified());

  SystemDefinition p3 = load_system_file(kDir / "period3.json");
  certify_definition(p3);
  CHECK_FALSE(p3.certified());

  SystemDefinition tent = load_system_file(kDir / "tent.json");
  CHECK(certify_definition(tent).overall.bound >= 1.0);

  SystemDefinition median = load_system_file(kDir / "median_exp_sin.json");
  const SystemCertificate m = certify_definition(median);
  CHECK(m.overall.bound < 1.0);
  CHECK(m.overall.method == LipschitzMethod::DerivativeSampling);
  CHECK(m.family_entries.size() == 3);
  CHECK(m.family_entries[0].size() == 4);

  SystemDefinition raw = load_system_file(kDir / "power_p2m2_raw.json");
  const SystemCertificate r = certify_definition(raw);
  CHECK(r.overall.bound == 0.6);
  CHECK(r.overall.method == LipschitzMethod::AnalyticAffine);

  SystemDefinition blk = load_system_file(kDir / "block_max.json");
  const SystemCertificate b = certify_definition(blk, {.pairs = 20'000});
  CHECK(b.block_entries.size() == 1);
  CHECK(b.overall.method == LipschitzMethod::PairSampling);
  CHECK(b.overall.bound <= 0.5 + 1e-12);
  CHECK(blk.certified());

  SystemDefinition mmr = load_system_file(kDir / "max_minus_rank.json");
  const SystemCertificate x = certify_definition(mmr);
  CHECK(x.overall.bound < 1.0);
  CHECK(mmr.certified());
}

TEST_CASE("schema violations") {
  const std::string head = R"({"M": 1, "P": 1, )";
  using K = ParseError::Kind;
  CHECK(parse_error(head + R"("k": 1, "functions": ["x"], "colour": 1})").kind() == K::Schema);
  CHECK(parse_error(head + R"("k": 1, "functions": ["x"], "affine": {"A": [[0.5]], "B": [[1]]}})").kind() ==
        K::Schema);
  CHECK(parse_error(head + R"("functions": ["x"]})").kind() == K::Schema);
  CHECK(parse_error(head + R"("k": 1, "schedule": [1], "functions": ["x"]})").kind() == K::Schema);
  CHECK(parse_error(head + R"("k": 1})").kind() == K::Schema);
  CHECK(parse_error(R"({"M": 0, "P": 1, "k": 1, "functions": []})").kind() == K::Schema);
  CHECK(parse_error(R"({"M": 2, "P": 1, "k": 1, "functions": ["x"]})").kind() == K::Schema);
  CHECK(parse_error(R"({"M": 1, "P": 2, "k": 1, "functions": [["x", "x", "x"]]})").kind() == K::Schema);
  CHECK(parse_error(R"({"schema": "rank-recur-system/2", "M": 1, "P": 1, "k": 1, "functions": ["x"]})").kind() ==
        K::Schema);
  CHECK(parse_error(head + R"("k": 2, "functions": ["x"]})").kind() == K::Schema);
  CHECK(parse_error(head + R"("k": 1, "domain": [1, 0], "functions": ["x"]})").kind() == K::Schema);
  CHECK(parse_error(R"({"M": 2, "P": 3, "max_minus_rank": ["x", "x"]})").kind() == K::Schema);
  CHECK(parse_error(R"({"M": 2, "P": 2, "k": 2, "power": {"A": [[1, 1], [1, 1]], "alphas": [0.1, 0.1]}})").kind() ==
        K::Schema);
  CHECK(parse_error(R"({"M": 2, "P": 2, "power": {"A": [[1, 1], [1, 1]], "alphas": [0.1, 0.1], "transform": "cube"}})")
            .kind() == K::Schema);
  CHECK(parse_error(R"([1, 2])").kind() == K::Schema);
}

TEST_CASE("expression errors name the field") {
  const ParseError e = parse_error(R"({"M": 2, "P": 2, "k": 1, "functions": [["x", "x"], ["x", "x +"]]})");
  CHECK(std::string(e.what()).find("functions[1][1]") != std::string::npos);
  const ParseError b = parse_error(R"({"M": 1, "P": 1, "block": ["y2"]})");
  CHECK(std::string(b.what()).find("block[0]") != std::string::npos);
}

TEST_CASE("malformed JSON and missing files") {
  CHECK_THROWS_AS(load_system_file(kDir / "does_not_exist.json"), IoError);
  try {
    load_system_file(kDir / "malformed.json");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Syntax);
    CHECK(std::string(e.what()).find("not valid JSON") != std::string::npos);
  }
}

TEST_CASE("schedules and grid forms") {
  const SystemDefinition def = parse_system(
      R"({"M": 2, "P": 2, "schedule": [2, 1], "functions": ["0.5*x + n", ["0.1*x", "0.2*x"]], "domain": [-3, 3]})");
  REQUIRE(def.rank);
  CHECK(def.rank->schedule.ks == std::vector<int>{2, 1});
  CHECK(def.rank->family.eval(1, 2.0, 1) == 2.0);
  CHECK(def.rank->family.eval(1, 2.0, 2) == 3.0);
  CHECK(def.rank->family.eval(2, 10.0, 2) == 2.0);
  CHECK(def.domain == DomainInterval(-3, 3));
  CHECK(to_string(def.source) == "functions");
}
