#pragma once

// Implementation of the `seobs` subcommands, separated from argument parsing
// so they can be driven in-process.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seobs/bias_observer.hpp"
#include "seobs/simulator.hpp"

namespace seobs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumerical = 2;

/// Environment variable naming the default directory for run outputs.
inline constexpr const char* kOutputDirEnv = "SEOBS_OUTPUT_DIR";

struct RunOverrides {
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  std::optional<NoiseStd> noise;
  std::optional<BiasLaw> bias_law;
  std::optional<Vector3> true_rotvec;
  std::optional<Vector3> true_position;
  std::optional<Vector3> estimate_rotvec;
  std::optional<Vector3> estimate_position;
  std::optional<BiasState> bias_estimate;
  std::optional<BiasState> true_bias;
};

struct RunConfig {
  /// Built-in names (case1, case2, case3) or scenario file paths. More than
  /// one entry is a batch.
  std::vector<std::string> scenarios;
  /// CSV path; only valid for a single scenario. Defaults to
  /// <output dir>/<scenario name>.csv.
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> plot_data_dir;
  RunOverrides overrides;
  unsigned jobs = 1;
};

/// Built-in name or scenario file. Throws ParseError.
Scenario resolve_scenario(const std::string& source);
/// Throws std::invalid_argument when an override is out of range.
Scenario apply_overrides(Scenario s, const RunOverrides& o);

/// Directory from kOutputDirEnv, or the working directory.
std::filesystem::path default_output_dir();

struct ConvergenceSummary {
  double final_rot_err = 0.0;
  double final_pos_err = 0.0;
  double final_bias_angular_err = 0.0;
  double final_bias_linear_err = 0.0;
  /// First time after which the metric stays at or below its threshold.
  std::optional<double> rot_settle;
  std::optional<double> pos_settle;
  std::optional<double> bias_angular_settle;
  std::optional<double> bias_linear_settle;
};

inline constexpr double kRotSettleThreshold = 1e-3;         // rad
inline constexpr double kPosSettleThreshold = 1e-3;         // m
inline constexpr double kBiasAngularSettleThreshold = 5e-3;  // rad/s
inline constexpr double kBiasLinearSettleThreshold = 5e-2;   // m/s

ConvergenceSummary summarize(const TrajectoryLog& log);

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
/// Prints the observability classification and G/H conditioning; exit 2 when
/// either check fails.
int cmd_check(const std::string& source, std::ostream& out, std::ostream& err);
/// Exit 0 iff every property passes.
int cmd_selftest(std::uint64_t seed, std::size_t samples, bool inject_sign_error,
                 std::ostream& out);

}  // namespace seobs
