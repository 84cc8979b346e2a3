#pragma once

// Forward Radon transform: a deterministic quadrature oracle for arbitrary
// functions and sinogram sampling on the OPED scanning geometries.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oped/geometry.hpp"
#include "oped/phantom.hpp"
#include "oped/specfun.hpp"

namespace oped {

enum class ScanType {
  TypeI,            // d=2: 2m+1 views, Chebyshev first-kind offsets cos psi_j
  TypeII,           // d=2: 2m+1 views, offsets cos(j pi / (2m+1)), j = 1..2m
  GegenbauerGauss,  // d=2: half-circle views; d=3: product cubature; Gauss-Gegenbauer offsets
  Custom,
};

std::string to_string(ScanType t);
/// Accepts "I", "II", "gegenbauer-gauss" (alias "gauss", "3d") and "custom".
ScanType parse_scan_type(const std::string& s);

/// Directions with cubature weights and offsets with normalized quadrature
/// weights for (1 - t^2)^((d-1)/2).
struct ScanGeometry {
  int dim = 0;
  ScanType type = ScanType::Custom;
  /// m for type I/II, n for Gegenbauer-Gauss / custom.
  int order = 0;
  SphericalCubature directions;
  QuadratureRule nodes;

  /// Degree of the reconstruction operator tied to this geometry: 2m for
  /// type I/II, n otherwise.
  [[nodiscard]] int operator_degree() const;
  [[nodiscard]] std::size_t views() const { return directions.size(); }
  [[nodiscard]] std::size_t offsets() const { return nodes.size(); }
};

ScanGeometry make_geometry(int dim, ScanType type, int order);

/// R f(xi_nu, t_j) in [nu][j] order.
struct Sinogram {
  ScanGeometry geometry;
  std::vector<double> values;

  [[nodiscard]] double at(std::size_t nu, std::size_t j) const { return values[nu * geometry.offsets() + j]; }
  double& at(std::size_t nu, std::size_t j) { return values[nu * geometry.offsets() + j]; }
};

/// (1 - t^2)^((d-1)/2) int_{B^(d-1)} f((t, sqrt(1-t^2) y) Q_xi) dy by composite
/// 8-point Gauss-Legendre panels (d=2) or a polar rule over the unit disk (d=3:
/// `refinement` radial panels times 8 refinement azimuths). Zero for |t| >= 1.
double radon_numeric(const PointFunction& f, std::span<const double> xi, double t, int refinement);

/// Vector-valued form: f writes `count` values per point, out receives the
/// `count` transforms. Same rule as radon_numeric.
using MultiPointFunction = std::function<void(std::span<const double> x, double* values)>;
void radon_numeric_multi(const MultiPointFunction& f, std::size_t count, std::span<const double> xi, double t,
                         int refinement, double* out);

struct SamplingOptions {
  /// Use closed-form (or exact-quadrature) projections for phantoms and polynomials.
  bool analytic = true;
  int refinement = 16;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  int threads = 0;
};

Sinogram sample_sinogram(const Source& source, const ScanGeometry& geometry, const SamplingOptions& options = {});
Sinogram sample_sinogram(const PointFunction& f, const ScanGeometry& geometry, const SamplingOptions& options = {});

/// Adds N(0, sigma^2) to every value. Normals come from Box-Muller on
/// mt19937_64 draws mapped to (0,1] as ((x >> 11) + 1) 2^-53, one pair per
/// two values in [nu][j] order, so results are platform independent.
void add_gaussian_noise(Sinogram& s, double sigma, std::uint64_t seed);

/// Single-file container: 16-byte magic "OPEDSINO" + 7 NUL + 0x01, uint64 LE
/// header length, UTF-8 JSON header, then float64 LE values in [nu][j] order.
void write_sinogram(const Sinogram& s, const std::string& path);
Sinogram read_sinogram(const std::string& path);
nlohmann::json geometry_header(const ScanGeometry& g);

}  // namespace oped
