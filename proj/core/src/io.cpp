#include "emrsense/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace emrsense {

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string iso8601_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string manifest_to_string(const RunManifest& manifest) {
  std::string out;
  out += "command=" + manifest.command + "\n";
  out += "version=" + manifest.version + "\n";
  out += "started=" + manifest.started_at + "\n";
  out += "finished=" + manifest.finished_at + "\n";
  for (const auto& [key, value] : manifest.parameters)
    out += key + "=" + value + "\n";
  return out;
}

std::string sweep_to_csv(const SweepResult& sweep) {
  std::string out = sweep.axis_name;
  for (const auto& [name, values] : sweep.series) {
    if (values.size() != sweep.axis_values.size())
      throw std::invalid_argument("sweep_to_csv: series '" + name +
                                  "' length does not match the axis");
    out += "," + name;
  }
  out += "\n";
  for (std::size_t row = 0; row < sweep.axis_values.size(); ++row) {
    out += format_double(sweep.axis_values[row]);
    for (const auto& [name, values] : sweep.series)
      out += "," + format_double(values[row]);
    out += "\n";
  }
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw std::runtime_error("cannot open for writing: " + path.string());
  stream << content;
  if (!stream) throw std::runtime_error("write failed: " + path.string());
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p += ".manifest";
  return p;
}

}  // namespace emrsense
