#include "manifest.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "oped/errors.hpp"
#include "oped/kernels.hpp"
#include "oped/parallel.hpp"

namespace oped::cli {

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for hashing");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read failed while hashing '" + path + "'");
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::string hex;
  hex.reserve(2 * len);
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", md[i]);
    hex += byte;
  }
  return hex;
}

nlohmann::json geometry_summary(const ScanGeometry& g) {
  return {
      {"d", g.dim},
      {"geometry", to_string(g.type)},
      {"m_or_n", g.order},
      {"views", g.views()},
      {"offsets", g.offsets()},
      {"operator_degree", g.operator_degree()},
      {"direction_degree", g.directions.degree},
      {"offset_exactness", g.nodes.exact_degree},
  };
}

Manifest::Manifest(std::string command, int argc, char** argv) : start_(std::chrono::steady_clock::now()) {
  std::vector<std::string> args(argv, argv + argc);
  doc_ = {
      {"tool", "oped"},
      {"version", OPED_VERSION},
      {"command", std::move(command)},
      {"command_line", args},
      {"inputs", nlohmann::json::array()},
      {"outputs", nlohmann::json::array()},
      {"metrics", nlohmann::json::object()},
      {"isa", kernels::isa_name(kernels::active_isa())},
  };
}

void Manifest::add_input(const std::string& role, const std::string& path) {
  doc_["inputs"].push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
}

void Manifest::add_output(const std::string& role, const std::string& path) {
  doc_["outputs"].push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
}

double Manifest::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Manifest::write(const std::string& target) {
  doc_["timing"] = {{"seconds", elapsed()}};
  const std::string path = target + ".manifest.json";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest '" + path + "'");
  out << doc_.dump(2) << '\n';
  if (!out) throw IoError("failed writing manifest '" + path + "'");
}

}  // namespace oped::cli
