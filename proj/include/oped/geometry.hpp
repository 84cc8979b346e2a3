#pragma once

// Direction sets and spherical cubature on S^1 / S^2, plus orthogonal frames
// used to parameterize hyperplanes.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace oped {

/// Unit directions xi_nu in R^d with positive weights summing to one
/// (normalized against sigma_d^-1 times the surface measure).
///
/// `degree` is the exactness degree for even spherical polynomials; a
/// symmetric cubature is only guaranteed exact on even integrands.
struct SphericalCubature {
  int dim = 0;
  std::vector<double> points;  // size() * dim, row per direction
  std::vector<double> weights;
  int degree = 0;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }

  [[nodiscard]] nlohmann::json to_json() const;
  static SphericalCubature from_json(const nlohmann::json& doc);
};

/// 2m+1 directions at angles 2 nu pi / (2m+1), equal weights. Degree 4m.
SphericalCubature circle_directions(int m);

/// n+1 directions at angles nu pi / (n+1), equal weights. Degree 2n.
SphericalCubature half_circle_directions(int n);

/// (n+1)^2 directions on S^2: Gauss-Legendre in the polar cosine times n+1
/// azimuths nu pi / (n+1) over a half circle. Degree 2n.
SphericalCubature sphere_product_cubature(int n);

/// Full-circle / full-sphere product rules, exact for *all* spherical
/// polynomials of degree <= `degree`. Used for ball quadrature and Gram checks.
SphericalCubature full_sphere_cubature(int dim, int degree);

/// Q_xi: d x d orthogonal matrix (row-major) whose first row is xi.
struct OrthogonalFrame {
  int dim = 0;
  std::vector<double> direction;
  std::vector<double> matrix;

  [[nodiscard]] double operator()(int row, int col) const { return matrix[row * dim + col]; }
};

/// Householder completion of xi (renormalized). Deterministic: with
/// v = e1 + xi when xi_1 >= 0 (first row then negated) and v = e1 - xi otherwise.
OrthogonalFrame orthogonal_frame(std::span<const double> xi);

/// Unit vector for angle theta on S^1.
std::vector<double> circle_point(double theta);

}  // namespace oped
