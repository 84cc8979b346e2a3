#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "binary_io.hpp"
#include "oped/errors.hpp"
#include "oped/radon.hpp"

namespace oped {

namespace {

constexpr std::array<char, 16> kMagic = {'O', 'P', 'E', 'D', 'S', 'I', 'N', 'O', 0, 0, 0, 0, 0, 0, 0, 1};
constexpr std::uint64_t kMaxHeader = 1ull << 30;

}  // namespace

nlohmann::json geometry_header(const ScanGeometry& g) {
  return {
      {"d", g.dim},
      {"geometry", to_string(g.type)},
      {"m_or_n", g.order},
      {"views", g.views()},
      {"offsets", g.offsets()},
      {"directions", g.directions.to_json()},
      {"nodes", g.nodes.nodes},
      {"weights", g.nodes.weights},
      {"weight_exponent", g.nodes.weight_exponent},
      {"exact_degree", g.nodes.exact_degree},
      {"dtype", "float64"},
      {"order", "[nu][j]"},
  };
}

void write_sinogram(const Sinogram& s, const std::string& path) {
  if (s.values.size() != s.geometry.views() * s.geometry.offsets()) {
    throw ValidationError("sinogram value count does not match its geometry");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::string header = geometry_header(s.geometry).dump();
  out.write(kMagic.data(), kMagic.size());
  detail::write_le<std::uint64_t>(out, header.size());
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (double v : s.values) detail::write_le(out, v);
  if (!out) throw IoError("failed writing '" + path + "'");
}

Sinogram read_sinogram(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::array<char, 16> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ValidationError("'" + path + "' is not an OPEDSINO container (bad magic or version)");
  }
  std::uint64_t header_len = 0;
  if (!detail::read_le(in, header_len) || header_len == 0 || header_len > kMaxHeader) {
    throw ValidationError("'" + path + "': corrupt header length");
  }
  std::string header(header_len, '\0');
  if (!in.read(header.data(), static_cast<std::streamsize>(header_len))) {
    throw ValidationError("'" + path + "': truncated header");
  }
  Sinogram s;
  try {
    const auto doc = nlohmann::json::parse(header);
    ScanGeometry& g = s.geometry;
    g.dim = doc.at("d").get<int>();
    g.type = parse_scan_type(doc.at("geometry").get<std::string>());
    g.order = doc.at("m_or_n").get<int>();
    g.directions = SphericalCubature::from_json(doc.at("directions"));
    g.nodes.nodes = doc.at("nodes").get<std::vector<double>>();
    g.nodes.weights = doc.at("weights").get<std::vector<double>>();
    g.nodes.weight_exponent = doc.value("weight_exponent", 0.5 * (g.dim - 1));
    g.nodes.exact_degree = doc.value("exact_degree", 0);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "': malformed header: " + e.what());
  }
  const ScanGeometry& g = s.geometry;
  if (g.directions.dim != g.dim) throw ValidationError("'" + path + "': direction dimension differs from d");
  if (g.nodes.nodes.size() != g.nodes.weights.size() || g.nodes.nodes.empty() || g.directions.size() == 0) {
    throw ValidationError("'" + path + "': inconsistent node/weight/direction counts");
  }
  const std::size_t count = g.views() * g.offsets();
  s.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    if (!detail::read_le(in, s.values[i])) throw ValidationError("'" + path + "': truncated value block");
    if (!std::isfinite(s.values[i])) throw ValidationError("'" + path + "': non-finite sinogram value");
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("'" + path + "': trailing bytes after values");
  return s;
}

}  // namespace oped
