#pragma once

#include <optional>
#include <ostream>
#include <string_view>

namespace rankrec::cli {

/// Process exit codes; a stable contract documented in docs/cli.md.
enum ExitCode : int {
  kOk = 0,
  kIoError = 1,
  kUsage = 2,
  kParseError = 3,
  kNotCertified = 4,
  kNumericDomain = 5,
  kNoPeriod = 6,
  kSolverFailed = 7,
  kVerifyFailed = 8,
  kUnsupportedShape = 9,
};

inline constexpr std::string_view kReportSchema = "rank-recur-report/1";
inline constexpr std::string_view kCsvVersionLine = "# rank-recur trajectory v1";
inline constexpr const char* kToleranceEnv = "RANK_RECUR_DEFAULT_TOL";

/// Value of RANK_RECUR_DEFAULT_TOL if set. Throws ArgumentError when the
/// variable is set but not a positive finite number.
std::optional<double> tolerance_from_env();

/// Runs the rank_recur command line. Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rankrec::cli
