#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracbubble/field.hpp"

namespace fracbubble {

using Json = nlohmann::ordered_json;

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Shortest round-trip decimal form; identical across runs and thread counts.
std::string format_number(double v);

struct FileEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::size_t bytes = 0;
};

// Everything a command writes goes through here so that the manifest can list it.
class OutputDir {
 public:
  explicit OutputDir(std::string root);

  const std::string& root() const { return root_; }
  std::string path(const std::string& rel) const;

  void write_text(const std::string& rel, const std::string& content);
  void write_json(const std::string& rel, const Json& j);
  // Header plus rows, every number through format_number.
  void write_csv(const std::string& rel, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);
  // Field snapshot: <stem>.bin (little-endian float64) and <stem>.json {n, L, N}.
  void write_field(const std::string& stem, const Field& u);

  const std::vector<FileEntry>& files() const { return files_; }
  // manifest.json: config digest, library versions, checks, wall times and the file list.
  void write_manifest(const std::string& config_digest, const Json& checks, const Json& wall_times) const;

 private:
  void record(const std::string& rel);

  std::string root_;
  std::vector<FileEntry> files_;
};

Json versions();

}  // namespace fracbubble
