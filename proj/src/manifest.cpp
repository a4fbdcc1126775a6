#include "readykit/manifest.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "readykit/types.hpp"

namespace readykit {

using nlohmann::json;

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file for digest: " + path);
  uint64_t h = 14695981039346656037ULL;
  char buf[8192];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return out;
}

void RunManifest::addInput(const std::string& path) {
  inputs[path] = file_digest(path);
}

void RunManifest::write(const std::string& dir) const {
  json j;
  j["command"] = command;
  j["argv"] = argv;
  j["inputs"] = inputs;
  j["config"] = config;
  j["outputs"] = outputs;
  j["diagnostics"] = diagnostics;
  j["artifact_version"] = artifactVersion;
  j["wall_clock_seconds"] = wallClockSeconds;
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / "run_manifest.json");
  if (!out) throw ValidationError("cannot write run manifest in " + dir);
  out << j.dump(2) << "\n";
}

RunManifest RunManifest::load(const std::string& dir) {
  std::ifstream in(std::filesystem::path(dir) / "run_manifest.json");
  if (!in) throw ValidationError("missing or unreadable run_manifest.json in " + dir);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("corrupt run manifest in " + dir + ": " + e.what());
  }
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.outputs = j.at("outputs").get<std::vector<std::string>>();
  m.diagnostics = j.at("diagnostics").get<std::map<std::string, std::string>>();
  m.artifactVersion = j.at("artifact_version").get<std::string>();
  m.wallClockSeconds = j.at("wall_clock_seconds").get<double>();
  return m;
}

}  // namespace readykit
