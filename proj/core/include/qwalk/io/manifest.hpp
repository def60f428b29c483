#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/io/csv.hpp"

namespace qwalk::io {

std::string_view tool_version();

/// Written once per run next to the outputs, as manifest.json.
struct RunManifest {
  std::string command;
  std::string version{tool_version()};
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<OutputRecord> outputs;
  double wall_seconds = 0.0;

  std::string to_json() const;
};

}  // namespace qwalk::io
