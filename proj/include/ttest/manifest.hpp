#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ttest {

// Version string reported by the CLI and embedded in every run manifest.
const char* tool_version();

// Reproducibility header attached to every CLI output.  `parameters` keeps
// insertion order so rendered output is byte-stable across reruns.
struct RunManifest {
  std::string command;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::optional<std::uint64_t> seed;
  std::string version;
  std::string timestamp;  // RFC3339 UTC, e.g. 2026-08-18T12:00:00Z
};

// Builds a manifest stamped with the tool version and the current UTC time.
// If the SOURCE_DATE_EPOCH environment variable is set to an integer number
// of seconds since the Unix epoch, that instant is used instead, so archived
// outputs can be reproduced byte-for-byte.
RunManifest make_manifest(
    std::string command,
    std::vector<std::pair<std::string, std::string>> parameters,
    std::optional<std::uint64_t> seed = std::nullopt);

// JSON object with keys: command, parameters, seed, tool_version, timestamp.
nlohmann::json manifest_json(const RunManifest& m);

// The same information as "# key: value" comment lines (one per entry,
// trailing newline included) for prepending to CSV output.
std::string manifest_csv_comment(const RunManifest& m);

}  // namespace ttest
