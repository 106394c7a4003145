#include "langvar/manifest.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "langvar/errors.hpp"
#include "langvar/text.hpp"

namespace langvar {

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open input for digest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return to_hex(fnv1a64(buf.str()));
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char out[32];
  std::strftime(out, sizeof(out), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out;
}

RunManifest make_manifest(const std::string& subcommand, const std::vector<std::string>& argv,
                          const std::vector<std::uint64_t>& seeds,
                          const std::vector<std::string>& input_paths) {
  RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.argv = argv;
  manifest.seeds = seeds;
  for (const auto& path : input_paths) manifest.input_digests[path] = file_digest(path);
  manifest.timestamp = utc_timestamp();
  return manifest;
}

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["subcommand"] = manifest.subcommand;
  j["argv"] = manifest.argv;
  j["seeds"] = manifest.seeds;
  j["inputs"] = manifest.input_digests;
  j["timestamp"] = manifest.timestamp;
  return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& data) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(data);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad manifest JSON: ") + e.what());
  }
  RunManifest manifest;
  try {
    manifest.tool = j.at("tool").get<std::string>();
    manifest.version = j.at("version").get<std::string>();
    manifest.subcommand = j.at("subcommand").get<std::string>();
    manifest.argv = j.at("argv").get<std::vector<std::string>>();
    manifest.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    manifest.input_digests = j.at("inputs").get<std::map<std::string, std::string>>();
    manifest.timestamp = j.at("timestamp").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("manifest missing required field: ") + e.what());
  }
  return manifest;
}

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write manifest: " + path.string());
  out << manifest_to_json(manifest);
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open manifest: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return manifest_from_json(buf.str());
}

}  // namespace langvar
