#include "mixedvar/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mixedvar/errors.hpp"

namespace mixedvar {

std::string manifest_to_json(const RunManifest& manifest) {
  nlohmann::json config;
  if (!manifest.config_json.empty()) {
    config = nlohmann::json::parse(manifest.config_json, nullptr,
                                   /*allow_exceptions=*/false);
    if (config.is_discarded()) config = manifest.config_json;
  }
  nlohmann::json j = {{"command", manifest.command},
                      {"config", config},
                      {"seed", manifest.seed},
                      {"version", manifest.version},
                      {"started_at", manifest.started_at},
                      {"finished_at", manifest.finished_at},
                      {"outputs", manifest.outputs}};
  return j.dump(2);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path);
  return buf.str();
}

void write_manifest(const RunManifest& manifest,
                    const std::string& output_path) {
  write_text_file(output_path + ".manifest.json",
                  manifest_to_json(manifest) + "\n");
}

}  // namespace mixedvar
