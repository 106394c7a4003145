#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace langvar {

inline constexpr const char* kToolName = "langvar";
inline constexpr const char* kToolVersion = "0.1.0";

// Reproducibility envelope written to every output directory: enough to
// re-run the subcommand (argv) and to check that the inputs are the same
// bytes (FNV-1a64 digests). Exactly one manifest.json per out-dir.
struct RunManifest {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string subcommand;
  std::vector<std::string> argv;  // subcommand followed by its arguments
  std::vector<std::uint64_t> seeds;
  std::map<std::string, std::string> input_digests;  // path -> 16-hex digest
  std::string timestamp;                             // ISO 8601 UTC
};

std::string file_digest(const std::string& path);
std::string utc_timestamp();

RunManifest make_manifest(const std::string& subcommand, const std::vector<std::string>& argv,
                          const std::vector<std::uint64_t>& seeds,
                          const std::vector<std::string>& input_paths);

std::string manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const std::string& data);
void write_manifest(const RunManifest& manifest, const std::string& out_dir);
RunManifest read_manifest(const std::string& path);

}  // namespace langvar
