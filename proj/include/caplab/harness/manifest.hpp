#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace caplab {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t v);
/// UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

struct CheckCount {
  std::string name;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct RunManifest {
  std::string command;
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = kArtifactVersion;
  std::string started;
  std::string finished;
  std::vector<CheckCount> checks;
  std::vector<std::string> outputs;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();

  std::size_t failures() const;
  nlohmann::ordered_json to_json() const;
  /// Writes <dir>/manifest.json through a temporary file and a rename.
  void write(const std::string& dir) const;
};

/// Hash of the canonical (sorted-key) dump of a config.
std::string config_hash(const nlohmann::json& config);

}  // namespace caplab
