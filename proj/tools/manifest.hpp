#pragma once

#include <chrono>
#include <string>
#include <vector>

#include <json.hpp>

#include "oped/radon.hpp"

namespace oped::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::string& path);

/// Geometry summary without the node and direction arrays.
nlohmann::json geometry_summary(const ScanGeometry& g);

class Manifest {
 public:
  Manifest(std::string command, int argc, char** argv);

  void add_input(const std::string& role, const std::string& path);
  void add_output(const std::string& role, const std::string& path);
  void set(const std::string& key, nlohmann::json value) { doc_[key] = std::move(value); }
  void set_metric(const std::string& key, nlohmann::json value) { doc_["metrics"][key] = std::move(value); }

  /// Stamps the elapsed time and writes `target + ".manifest.json"`.
  void write(const std::string& target);

  [[nodiscard]] double elapsed() const;
  [[nodiscard]] const nlohmann::json& doc() const { return doc_; }

 private:
  nlohmann::json doc_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace oped::cli
