#include "ttest/manifest.hpp"

#include <cerrno>
#include <cstdlib>
#include <ctime>
#include <sstream>
#include <stdexcept>

namespace ttest {

const char* tool_version() { return "0.1.0"; }

namespace {

std::time_t manifest_instant() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0' && errno == 0) {
      return static_cast<std::time_t>(v);
    }
  }
  return std::time(nullptr);
}

std::string rfc3339_utc(std::time_t t) {
  std::tm tm{};
#if defined(_WIN32)
  gmtime_s(&tm, &t);
#else
  gmtime_r(&t, &tm);
#endif
  char buf[32];
  if (std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm) == 0) {
    throw std::runtime_error("manifest: failed to format timestamp");
  }
  return buf;
}

}  // namespace

RunManifest make_manifest(
    std::string command,
    std::vector<std::pair<std::string, std::string>> parameters,
    std::optional<std::uint64_t> seed) {
  RunManifest m;
  m.command = std::move(command);
  m.parameters = std::move(parameters);
  m.seed = seed;
  m.version = tool_version();
  m.timestamp = rfc3339_utc(manifest_instant());
  return m;
}

nlohmann::json manifest_json(const RunManifest& m) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : m.parameters) {
    params[key] = value;
  }
  nlohmann::json j;
  j["command"] = m.command;
  j["parameters"] = params;
  if (m.seed.has_value()) {
    j["seed"] = *m.seed;
  } else {
    j["seed"] = nullptr;
  }
  j["tool_version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

std::string manifest_csv_comment(const RunManifest& m) {
  std::ostringstream os;
  os << "# command: " << m.command << '\n';
  for (const auto& [key, value] : m.parameters) {
    os << "# " << key << ": " << value << '\n';
  }
  if (m.seed.has_value()) {
    os << "# seed: " << *m.seed << '\n';
  }
  os << "# tool_version: " << m.version << '\n';
  os << "# timestamp: " << m.timestamp << '\n';
  return os.str();
}

}  // namespace ttest
