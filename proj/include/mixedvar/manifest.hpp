#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mixedvar {

inline constexpr const char* kVersion = "0.1.0";

// Provenance sidecar written next to every CLI output file. The data files
// themselves are byte-reproducible for a fixed (config, seed); the manifest
// carries the wall-clock timestamps and so is allowed to differ across runs.
struct RunManifest {
  std::string command;      // full command line as invoked
  std::string config_json;  // resolved option values, serialized JSON object
  std::uint64_t seed = 0;   // master seed after defaulting
  std::string version = kVersion;
  std::string started_at;   // ISO 8601 UTC
  std::string finished_at;  // ISO 8601 UTC
  std::vector<std::string> outputs;  // paths of the files produced
};

std::string manifest_to_json(const RunManifest& manifest);

// ISO 8601 UTC timestamp for the current wall clock.
std::string utc_timestamp();

// Writes `text` to `path` (throws IoError on failure).
void write_text_file(const std::string& path, const std::string& text);

// Reads a whole file (throws IoError on failure).
std::string read_text_file(const std::string& path);

// Writes the manifest to `output_path` + ".manifest.json".
void write_manifest(const RunManifest& manifest,
                    const std::string& output_path);

}  // namespace mixedvar
