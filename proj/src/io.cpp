#include "spall/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <json.hpp>

namespace spall {

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write " + file.string());
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& file, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
  auto out = open_out(file);
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
}

void write_field_csv(const std::filesystem::path& file, const StateField& f) {
  std::vector<std::vector<double>> rows;
  for (int j = 0; j < f.grid.size(); ++j)
    rows.push_back({f.grid.point(j), f.values(j).real(), f.values(j).imag()});
  write_csv(file, "x,re,im", rows);
}

void write_trajectory_csv(const std::filesystem::path& file,
                          const Trajectory& traj) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < traj.times.size(); ++i)
    rows.push_back({traj.arclength[i], traj.times[i].real(), traj.times[i].imag(),
                    traj.supnorms[i]});
  write_csv(file, "s,re_t,im_t,supnorm", rows);
}

TimePath read_path_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError(file.string() + ": cannot open path file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& err) {
    throw UsageError(file.string() + ": not valid JSON (" + err.what() + ")");
  }
  if (!doc.is_array() || doc.empty())
    throw UsageError(file.string() + ": expected a non-empty array of [re, im] pairs");
  std::vector<Complex> w;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& p = doc[k];
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw UsageError(file.string() + ": waypoint " + std::to_string(k) +
                       " is not a [re, im] pair of numbers");
    w.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  try {
    return TimePath(std::move(w));
  } catch (const std::exception& err) {
    throw UsageError(file.string() + ": " + err.what());
  }
}

void write_report(const std::filesystem::path& file,
                  const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["name"] = report.name;
  j["verdict"] = report.passed() ? "pass" : "fail";
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metrics) {
    if (std::isfinite(v))
      metrics[k] = v;
    else
      metrics[k] = format_number(v);
  }
  j["metrics"] = metrics;
  j["failures"] = report.failures;
  j["artifacts"] = report.artifacts;
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  j["generated_at"] = stamp;
  auto out = open_out(file);
  out << j.dump(2) << '\n';
}

}  // namespace spall
