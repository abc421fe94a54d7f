#include "fracbubble/io.hpp"

#include <openssl/evp.h>

#include <boost/version.hpp>
#include <Eigen/Core>
#include <fftw3.h>
#include <gsl/gsl_version.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fracbubble/errors.hpp"

namespace fracbubble {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    computation_error("IoError", "SHA-256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) computation_error("IoError", "cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return sha256_hex(ss.str());
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

OutputDir::OutputDir(std::string root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) computation_error("IoError", "cannot create output directory " + root_);
}

std::string OutputDir::path(const std::string& rel) const { return (fs::path(root_) / rel).string(); }

void OutputDir::record(const std::string& rel) {
  const std::string p = path(rel);
  FileEntry e{rel, sha256_file(p), static_cast<std::size_t>(fs::file_size(p))};
  for (auto& f : files_) {
    if (f.path == rel) {
      f = e;
      return;
    }
  }
  files_.push_back(e);
}

void OutputDir::write_text(const std::string& rel, const std::string& content) {
  const fs::path p = path(rel);
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary);
  if (!os) computation_error("IoError", "cannot write " + p.string());
  os << content;
  os.close();
  record(rel);
}

void OutputDir::write_json(const std::string& rel, const Json& j) { write_text(rel, j.dump(2) + "\n"); }

void OutputDir::write_csv(const std::string& rel, const std::vector<std::string>& header,
                          const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ",";
      out += format_number(r[i]);
    }
    out += "\n";
  }
  write_text(rel, out);
}

void OutputDir::write_field(const std::string& stem, const Field& u) {
  const fs::path p = path(stem);
  fs::create_directories(p.parent_path());
  export_raw(u, p.string());
  record(stem + ".bin");
  record(stem + ".json");
}

void OutputDir::write_manifest(const std::string& config_digest, const Json& checks, const Json& wall_times) const {
  Json m;
  m["config_sha256"] = config_digest;
  m["versions"] = versions();
  m["checks"] = checks;
  m["wall_times_s"] = wall_times;
  Json files = Json::array();
  for (const auto& f : files_) files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  m["files"] = files;
  std::ofstream os(path("manifest.json"), std::ios::binary);
  if (!os) computation_error("IoError", "cannot write manifest");
  os << m.dump(2) << "\n";
}

Json versions() {
  Json v;
  v["fracbubble"] = "1.0.0";
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["boost"] = std::to_string(BOOST_VERSION / 100000) + "." + std::to_string(BOOST_VERSION / 100 % 1000) + "." +
               std::to_string(BOOST_VERSION % 100);
  v["gsl"] = std::string(GSL_VERSION);
  v["fftw"] = std::string(fftw_version);
  return v;
}

}  // namespace fracbubble
