#pragma once

#include <filesystem>
#include <string>

#include "spall/continuation.hpp"
#include "spall/experiments.hpp"

namespace spall {

/// Raised for malformed user input files and configuration.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest round-trip form with 17 significant digits.
std::string format_number(double v);

/// `x,re,im`, one row per interior grid point.
void write_field_csv(const std::filesystem::path& file, const StateField& f);

/// `s,re_t,im_t,supnorm`, one row per stored snapshot.
void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj);

/// Reads a JSON array of [re, im] pairs. Errors name the file and the
/// offending waypoint index.
TimePath read_path_file(const std::filesystem::path& file);

/// report.json: name, verdict, metrics, artifacts, failures, generated_at.
void write_report(const std::filesystem::path& file,
                  const ExperimentReport& report);

/// Writes a CSV from a header and rows of numbers.
void write_csv(const std::filesystem::path& file, const std::string& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace spall
