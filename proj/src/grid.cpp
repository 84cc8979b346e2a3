#include "oped/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>

#include "oped/errors.hpp"
#include "binary_io.hpp"

namespace oped {

ImageGrid ImageGrid::make(int dim, int resolution) {
  if (dim != 2 && dim != 3) throw ValidationError("grids are supported in d = 2 and d = 3");
  if (resolution < 2) throw ValidationError("grid resolution must be at least 2");
  ImageGrid g;
  g.dim = dim;
  g.resolution = resolution;
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(resolution);
  g.values.assign(n, 0.0);
  g.mask.assign(n, 0);
  double x[3];
  for (std::size_t i = 0; i < n; ++i) {
    g.point(i, x);
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += x[a] * x[a];
    g.mask[i] = r2 <= 1.0 ? 1 : 0;
  }
  return g;
}

void ImageGrid::point(std::size_t idx, double* x) const {
  const auto r = static_cast<std::size_t>(resolution);
  for (int a = 0; a < dim; ++a) {
    x[a] = coordinate(static_cast<int>(idx % r));
    idx /= r;
  }
}

std::size_t ImageGrid::inside_count() const {
  return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

ImageGrid::MaskedPoints ImageGrid::masked_points() const {
  MaskedPoints mp;
  mp.coords.assign(dim, {});
  const std::size_t n = inside_count();
  for (auto& c : mp.coords) c.reserve(n);
  mp.index.reserve(n);
  double x[3];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!mask[i]) continue;
    point(i, x);
    for (int a = 0; a < dim; ++a) mp.coords[a].push_back(x[a]);
    mp.index.push_back(i);
  }
  return mp;
}

ImageGrid sample_source(const Source& s, int resolution) {
  ImageGrid g = ImageGrid::make(source_dim(s), resolution);
  double x[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.mask[i]) continue;
    g.point(i, x);
    g.values[i] = source_value(s, std::span<const double>(x, g.dim));
  }
  return g;
}

nlohmann::json ErrorMetrics::to_json() const {
  nlohmann::json j{{"l2", l2}, {"relative_l2", relative_l2}, {"linf", linf}, {"masked_points", count}};
  if (!component_mean_error.empty()) j["component_mean_error"] = component_mean_error;
  return j;
}

ErrorMetrics compare_grids(const ImageGrid& recon, const ImageGrid& reference) {
  if (recon.dim != reference.dim || recon.resolution != reference.resolution) {
    throw ValidationError("grid dimension/resolution mismatch");
  }
  ErrorMetrics m;
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t i = 0; i < recon.size(); ++i) {
    if (!recon.mask[i]) continue;
    const double e = recon.values[i] - reference.values[i];
    err2 += e * e;
    ref2 += reference.values[i] * reference.values[i];
    m.linf = std::max(m.linf, std::abs(e));
    ++m.count;
  }
  if (m.count > 0) m.l2 = std::sqrt(err2 / m.count);
  m.relative_l2 = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::sqrt(err2);
  return m;
}

ErrorMetrics compare_to_source(const ImageGrid& recon, const Source& reference) {
  if (source_dim(reference) != recon.dim) throw ValidationError("reference dimension does not match grid");
  const ImageGrid truth = sample_source(reference, recon.resolution);
  ErrorMetrics m = compare_grids(recon, truth);
  if (const auto* ph = std::get_if<Phantom>(&reference)) {
    double x[3];
    for (const auto& c : ph->components()) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < recon.size(); ++i) {
        if (!recon.mask[i]) continue;
        recon.point(i, x);
        if (c.quadratic_form(std::span<const double>(x, recon.dim)) <= 1.0) {
          sum += recon.values[i] - truth.values[i];
          ++n;
        }
      }
      m.component_mean_error.push_back(n > 0 ? sum / n : 0.0);
    }
  }
  return m;
}

double overshoot(const ImageGrid& recon, const ImageGrid& reference) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (!reference.mask[i]) continue;
    lo = std::min(lo, reference.values[i]);
    hi = std::max(hi, reference.values[i]);
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < recon.size(); ++i) {
    if (!recon.mask[i]) continue;
    worst = std::max({worst, recon.values[i] - hi, lo - recon.values[i]});
  }
  return worst;
}

void write_grid(const ImageGrid& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  for (double v : g.values) detail::write_le(out, static_cast<float>(v));
  if (!out) throw IoError("write failed for " + path);

  nlohmann::json side{{"d", g.dim},
                      {"resolution", std::vector<int>(g.dim, g.resolution)},
                      {"extent", {-1.0, 1.0}},
                      {"order", "row-major"},
                      {"fastest_axis", "x1"},
                      {"dtype", "float32-le"},
                      {"mask", "norm(x) <= 1"}};
  std::ofstream js(path + ".json");
  if (!js) throw IoError("cannot write " + path + ".json");
  js << side.dump(2) << '\n';
}

ImageGrid read_grid(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw IoError("cannot open grid sidecar " + path + ".json");
  nlohmann::json side;
  int dim = 0, res = 0;
  try {
    side = nlohmann::json::parse(js);
    dim = side.at("d").get<int>();
    const auto r = side.at("resolution");
    res = r.is_array() ? r.at(0).get<int>() : r.get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed grid sidecar: ") + e.what());
  }
  ImageGrid g = ImageGrid::make(dim, res);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  for (auto& v : g.values) {
    float f = 0.0f;
    if (!detail::read_le(in, f)) throw ValidationError("grid file " + path + " is truncated");
    v = f;
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ValidationError("grid file " + path + " has trailing data");
  return g;
}

void write_pgm(const ImageGrid& g, const std::string& path) {
  const int r = g.resolution;
  const std::size_t slice = g.dim == 3 ? static_cast<std::size_t>(r / 2) * r * r : 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < static_cast<std::size_t>(r) * r; ++i) {
    lo = std::min(lo, g.values[slice + i]);
    hi = std::max(hi, g.values[slice + i]);
  }
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << "P5\n" << r << ' ' << r << "\n255\n";
  for (int row = r - 1; row >= 0; --row) {
    for (int col = 0; col < r; ++col) {
      const double v = g.values[slice + static_cast<std::size_t>(row) * r + col];
      out.put(static_cast<char>(static_cast<unsigned char>(std::lround((v - lo) * scale))));
    }
  }
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace oped
