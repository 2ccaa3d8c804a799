#include "caplab/harness/manifest.hpp"

#include <cstdio>
#include <ctime>

#include "caplab/class_io.hpp"

namespace caplab {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const nlohmann::json& config) { return hex64(fnv1a(config.dump())); }

std::size_t RunManifest::failures() const {
  std::size_t f = 0;
  for (const auto& c : checks) f += c.failed;
  return f;
}

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["version"] = version;
  j["started"] = started;
  j["finished"] = finished;
  nlohmann::ordered_json checks_json = nlohmann::ordered_json::array();
  for (const auto& c : checks)
    checks_json.push_back({{"name", c.name}, {"passed", c.passed}, {"failed", c.failed}, {"skipped", c.skipped}});
  j["checks"] = checks_json;
  j["outputs"] = outputs;
  j["details"] = details;
  return j;
}

void RunManifest::write(const std::string& dir) const {
  write_text_file(dir + "/manifest.json", to_json().dump(2) + "\n");
}

}  // namespace caplab
