#pragma once

// Scenario text files and CSV emission.
//
// Scenario files are sectioned key/value text, '#' starts a comment:
//
//   [geometry]
//   vector = 0 0 1
//   point  = 1 0 0
//   [gains]
//   k = 2 2
//   [bias]
//   omega = -0.02 0.02 0.01
//   v     = 0.2 -0.1 0.1
//
// Keys not given keep the built-in defaults (see README for the full key list).

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "seobs/simulator.hpp"

namespace seobs {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ParseError (with the line number) on malformed input, unknown
/// sections or keys, and on an empty [geometry] section.
Scenario parse_scenario(std::string_view text, const std::string& default_name = "custom");
/// Throws ParseError when the file cannot be read; the scenario name defaults
/// to the file stem.
Scenario load_scenario_file(const std::filesystem::path& path);
/// Inverse of parse_scenario; numbers use 17 significant digits.
std::string format_scenario(const Scenario& s);

/// Decimal with 17 significant digits (round-trips exactly), independent of the C locale.
std::string format_number(double v);

/// Column names of the trajectory CSV, in order.
std::vector<std::string> trajectory_csv_columns();
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log);

/// Rotation angle and x, y, z of truth and estimate vs time.
void write_pose_plot_data(std::ostream& out, const TrajectoryLog& log);
/// |b_tilde_Omega| and |b_tilde_V| vs time.
void write_bias_plot_data(std::ostream& out, const TrajectoryLog& log);

}  // namespace seobs
