#pragma once

// Singular value decomposition of the Radon transform on B^d (d = 2, 3):
// orthonormal bases f_(k,j)^n on the ball and g_(k,j)^n on Z = S^(d-1) x [-1,1],
// singular values gamma_n, and truncated-SVD reconstruction.
//
// Inner products are normalized: <f,g>_B = b_d^-1 int_B f g, and
// <f,g>_Z = c_(d/2) int sigma_d^-1 int_S f g dw (1 - t^2)^((1-d)/2) dt.
//
// Real spherical harmonics are orthonormal under sigma_d^-1 int_S. Order
// within a degree l: d = 2 gives cos, sin; d = 3 gives m = 0, 1c, 1s, ..., lc, ls.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <json.hpp>

#include "oped/grid.hpp"
#include "oped/phantom.hpp"
#include "oped/radon.hpp"

namespace oped {

/// dim H_m^d.
int harmonic_dim(int d, int m);
/// dim V_n^d = C(n+d-1, n).
int ball_space_dim(int d, int n);

struct BasisIndex {
  int n = 0;
  int k = 0;  // 0 <= 2k <= n
  int j = 1;  // 1 <= j <= dim H_(n-2k)

  bool operator==(const BasisIndex&) const = default;
};

void validate_index(int d, const BasisIndex& idx);

/// Indices of degree n ordered by k, then j.
std::vector<BasisIndex> basis_indices(int d, int n);
/// All indices of degree <= N, ordered by n.
std::vector<BasisIndex> basis_indices_upto(int d, int N);

/// Y_(j,m)(xi) on the unit sphere (xi is used as given).
double spherical_harmonic(int d, int m, int j, std::span<const double> xi);

/// All dim H_m^d solid harmonics |x|^m Y_(j,m)(x/|x|) at x, for m = 0..M,
/// concatenated by degree.
std::vector<double> solid_harmonics_upto(int d, int M, std::span<const double> x);

/// f_(k,j)^n(x) = h_(n,k)^-1 p_k^(0, n-2k+(d-2)/2)(2|x|^2 - 1) Y_(j,n-2k)(x).
double ball_basis(int d, const BasisIndex& idx, std::span<const double> x);

/// Every f_(k,j)^n with n <= N at x, in basis_indices_upto order.
std::vector<double> ball_basis_upto(int d, int N, std::span<const double> x);

/// g_(k,j)^n(xi, t) = [h_n^(d/2)]^-1/2 (1 - t^2)^((d-1)/2) C_n^(d/2)(t) Y_(j,n-2k)(xi).
double cylinder_basis(int d, const BasisIndex& idx, std::span<const double> xi, double t);

/// gamma_n = b_(d-1) sqrt(n! / (d)_n).
double singular_value(int d, int n);

/// R P(xi, t) = b_(d-1) (1 - t^2)^((d-1)/2) C_n(t) / C_n(1) P(xi) for P in V_n^d.
double radon_of_orthogonal_polynomial(int d, int n, const PointFunction& P, std::span<const double> xi, double t);

/// Ball rule exact for polynomials of degree <= `degree`: Gauss-Legendre in
/// the radius (absorbing r^(d-1)) times a full sphere cubature. Weights sum to one
/// (normalized measure b_d^-1 dx).
struct BallQuadrature {
  int dim = 0;
  std::vector<double> points;  // row per point
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t i) const {
    return {points.data() + i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};
BallQuadrature ball_quadrature(int d, int degree);

/// Coefficients a_(n,k,j) in basis_indices_upto order.
struct SvdCoefficients {
  int dim = 0;
  int truncation = 0;
  std::vector<BasisIndex> indices;
  std::vector<double> values;
};

/// <g, g_(k,j)^m>_Z for m <= N with the Z-integral discretized by the
/// sinogram's own geometry. Requires direction degree >= 2N and offset
/// exactness >= 2N; otherwise a ValidationError names the shortfall.
SvdCoefficients sinogram_coefficients(const Sinogram& s, int N);
/// Largest N the geometry supports: min(direction degree, offset exactness) / 2.
int max_truncation(const ScanGeometry& g);

/// S_N^* f = sum_(m <= N) gamma_m^-1 sum_(k,j) <g, g_(k,j)^m>_Z f_(k,j)^m.
std::vector<double> truncated_svd_points(const SvdCoefficients& c, const std::vector<std::vector<double>>& coords,
                                         int threads = 0);
ImageGrid truncated_svd_reconstruct(const Sinogram& s, int N, int resolution, int threads = 0);

/// Coefficients of R f in the g basis: gamma_n <f, f_(k,j)^n>_B by ball
/// quadrature of degree `quad_degree` (0 picks 2N + 8).
SvdCoefficients svd_forward(int d, const PointFunction& f, int N, int quad_degree = 0);

/// R f(xi, t) = sum coefficient * g(xi, t).
double radon_from_coefficients(const SvdCoefficients& c, std::span<const double> xi, double t);

/// Compact form: c_(d/2) (1 - t^2)^((d-1)/2) sum_n [h_n]^-1 int_B f C_n(<x,xi>) dx C_n(t)
/// truncated at N, with the ball integral by quadrature.
double radon_compact(int d, const PointFunction& f, int N, std::span<const double> xi, double t, int quad_degree = 0);

/// R^* g(x) = c_(d/2) b_(d-1) sum_(n<=N) [h_n]^-1 sigma_d^-1 int int g(xi,t) C_n(<x,xi>) C_n(t) dw dt
/// where g(xi, t) = (1 - t^2)^((d-1)/2) q(xi, t) is supplied through q. The
/// integral uses a full sphere cubature and a Gauss rule, both of degree quad_degree.
using CylinderFunction = std::function<double(std::span<const double> xi, double t)>;
double adjoint_compact(int d, const CylinderFunction& q, int N, std::span<const double> x, int quad_degree);

/// <g, h>_Z for g = (1-t^2)^((d-1)/2) p, h = (1-t^2)^((d-1)/2) q, given p and q.
double cylinder_inner(int d, const CylinderFunction& p, const CylinderFunction& q, int quad_degree);
/// <f, g>_B by ball quadrature.
double ball_inner(int d, const PointFunction& f, const PointFunction& g, int quad_degree);

/// Numeric Radon transform of every basis function with n <= N at once.
std::vector<double> radon_numeric_basis(int d, int N, std::span<const double> xi, double t, int refinement);

struct SvdVerifyReport {
  int dim = 0;
  int n_max = 0;
  double max_pair_residual = 0.0;  // |R f - gamma g| over the (xi,t) lattice
  double ball_gram_residual = 0.0;
  double cylinder_gram_residual = 0.0;
  double kernel_residual = 0.0;     // sphere-integral kernel vs basis-sum kernel
  std::vector<double> gamma;
  std::vector<double> measured_gamma;

  [[nodiscard]] nlohmann::json to_json() const;
};

/// Pair identity on a lattice x lattice grid of (direction, offset), Gram
/// matrices of both bases, and gamma_n measured as ||R f|| / ||f||.
SvdVerifyReport svd_verify(int d, int n_max, int lattice = 20, std::uint64_t seed = 7);

}  // namespace oped
