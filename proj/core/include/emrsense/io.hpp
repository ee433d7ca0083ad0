#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "emrsense/montecarlo.hpp"

namespace emrsense {

// Shortest representation that round-trips a double (17 significant digits).
std::string format_double(double value);

std::string iso8601_utc_now();

// Serialized next to every CSV so a run can be reproduced bit-exactly
// (timestamps are informational and excluded from that contract).
struct RunManifest {
  std::string command;
  std::string version;
  std::string started_at;
  std::string finished_at;
  std::vector<std::pair<std::string, std::string>> parameters;
};

std::string manifest_to_string(const RunManifest& manifest);

// CSV encoding of a sweep: header row, one row per axis point, LF endings,
// numbers at 17 significant digits.
std::string sweep_to_csv(const SweepResult& sweep);

void write_text_file(const std::filesystem::path& path, const std::string& content);

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

}  // namespace emrsense
