#include "qwalk/io/manifest.hpp"

#include <nlohmann/json.hpp>

#ifndef QWALK_VERSION
#define QWALK_VERSION "unknown"
#endif

namespace qwalk::io {

std::string_view tool_version() { return QWALK_VERSION; }

std::string RunManifest::to_json() const {
  nlohmann::ordered_json doc;
  doc["tool"] = "qwalk";
  doc["version"] = version;
  doc["command"] = command;
  auto& cfg = doc["config"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : config) cfg[key] = value;
  doc["conventions"] = {
      {"sites", "-n..n per step, steps counted from 1"},
      {"phases", "units of pi, applied to coin 1 before the coin"},
      {"pair_matrix",
       "symmetric; entry (i,j), i != j, holds half the probability of the unordered pair {i,j}; "
       "diagonal holds both photons on one site; entries sum to 1"},
      {"var2", "variance of (i+j)/2"},
      {"std", "unbiased (n-1)"},
  };
  auto& files = doc["outputs"] = nlohmann::ordered_json::array();
  for (const auto& out : outputs) {
    files.push_back({{"file", out.path.filename().string()},
                     {"path", out.path.generic_string()},
                     {"bytes", out.bytes},
                     {"sha256", out.sha256}});
  }
  doc["timings"] = {{"wall_seconds", wall_seconds}};
  return doc.dump(2) + "\n";
}

}  // namespace qwalk::io
