#pragma once

// Regular sampling grids over [-1,1]^d with a unit-ball mask, raw float32
// files with a JSON sidecar, PGM export and masked error metrics.

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "oped/phantom.hpp"

namespace oped {

/// Values at cell centers x_a = -1 + (2 i_a + 1) / resolution. Flat index is
/// row-major with x1 varying fastest: index = ((i_3 R + i_2) R + i_1).
struct ImageGrid {
  int dim = 0;
  int resolution = 0;
  std::vector<double> values;
  std::vector<unsigned char> mask;  // 1 inside the closed unit ball

  static ImageGrid make(int dim, int resolution);

  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] double coordinate(int i) const { return -1.0 + (2.0 * i + 1.0) / resolution; }
  /// Coordinates (x1, ..., xd) of flat index `idx`.
  void point(std::size_t idx, double* x) const;
  [[nodiscard]] std::size_t inside_count() const;

  /// Structure-of-arrays coordinates of the masked points, and their indices.
  struct MaskedPoints {
    std::vector<std::vector<double>> coords;  // coords[axis][p]
    std::vector<std::size_t> index;
  };
  [[nodiscard]] MaskedPoints masked_points() const;
};

ImageGrid sample_source(const Source& s, int resolution);

struct ErrorMetrics {
  double l2 = 0.0;           // root mean square over masked points
  double relative_l2 = 0.0;  // ||r - f|| / ||f|| over masked points
  double linf = 0.0;
  std::size_t count = 0;
  std::vector<double> component_mean_error;  // phantom references only

  [[nodiscard]] nlohmann::json to_json() const;
};

ErrorMetrics compare_grids(const ImageGrid& recon, const ImageGrid& reference);
ErrorMetrics compare_to_source(const ImageGrid& recon, const Source& reference);

/// Largest excursion of recon outside [min f, max f] over masked points.
double overshoot(const ImageGrid& recon, const ImageGrid& reference);

/// `path` gets little-endian float32 values; `path + ".json"` the sidecar.
void write_grid(const ImageGrid& g, const std::string& path);
ImageGrid read_grid(const std::string& path);

/// 8-bit binary PGM of a 2D grid (or the central x3 slice of a 3D grid),
/// linear min-max window, top row is the largest x2.
void write_pgm(const ImageGrid& g, const std::string& path);

}  // namespace oped
