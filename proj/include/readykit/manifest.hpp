#pragma once

#include <map>
#include <string>
#include <vector>

namespace readykit {

/// FNV-1a 64-bit digest of a file's bytes, hex-encoded. Stable across runs for
/// identical inputs.
std::string file_digest(const std::string& path);

/// Record of one CLI run: what was executed, on which inputs, with which
/// configuration, and what came out. Written as run_manifest.json in the
/// output directory; a run is re-executable from its manifest alone.
struct RunManifest {
  std::string command;                 // subcommand name
  std::vector<std::string> argv;       // full invocation
  std::map<std::string, std::string> inputs;   // path -> digest
  std::map<std::string, std::string> config;   // resolved option snapshot
  std::vector<std::string> outputs;            // paths written
  std::map<std::string, std::string> diagnostics;
  std::string artifactVersion;
  double wallClockSeconds = 0.0;

  void addInput(const std::string& path);
  void write(const std::string& dir) const;
  static RunManifest load(const std::string& dir);
};

}  // namespace readykit
