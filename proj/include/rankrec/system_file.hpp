#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankrec/lipschitz.hpp"
#include "rankrec/system.hpp"

namespace rankrec {

inline constexpr std::string_view kSystemSchema = "rank-recur-system/1";

/// A loaded system definition. Every source yields a BlockSystem; rank-type
/// sources (affine, power, functions) also keep the RankSystem form.
struct SystemDefinition {
  enum class Source { Affine, Power, Functions, Block, MaxMinusRank };

  std::string name;
  Source source = Source::Functions;
  int M = 1;
  int P = 1;
  DomainInterval domain;
  std::optional<RankSystem> rank;
  /// The autonomous family behind a max_minus_rank source.
  std::optional<ScalarFamily> base_family;
  BlockSystem block;

  Matrix power_A;
  std::vector<double> power_alphas;
  PowerTransform transform = PowerTransform::Log;

  /// Raw power systems live on x > 0 and start from the ones vector.
  bool positive_state() const { return source == Source::Power && transform == PowerTransform::Raw; }
  double default_seed_value() const { return positive_state() ? 1.0 : 0.0; }
  bool certified() const { return block.certified(); }
};

std::string to_string(SystemDefinition::Source s);

/// Parses the JSON system format. Schema and DSL problems throw ParseError.
SystemDefinition parse_system(std::string_view json_text);

/// Reads and parses a system file; unreadable files throw IoError.
SystemDefinition load_system_file(const std::filesystem::path& path);

struct CertifySettings {
  int grid_points = defaults::kGridPoints;
  double safety_factor = defaults::kSafetyFactor;
  long pairs = defaults::kPairs;
  std::uint64_t seed = defaults::kSamplingSeed;
};

/// Per-entry detail behind a system's contraction bound.
struct SystemCertificate {
  LipschitzEstimate overall;
  std::vector<std::vector<LipschitzEstimate>> family_entries;  // [i-1][phase-1], rank-type sources
  std::vector<LipschitzEstimate> block_entries;                // per phase, block sources
};

/// Estimates contraction bounds on the definition's domain and propagates them
/// into both the family and the block form. Raw power systems keep their exact
/// log-coordinate bound.
SystemCertificate certify_definition(SystemDefinition& def, const CertifySettings& settings = {});

}  // namespace rankrec
