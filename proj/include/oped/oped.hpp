#pragma once

// OPED reconstruction: the kernel Phi_n, the semi-discrete partial sum, the
// fully discrete operator A_n on any supported geometry, the eta-smoothed
// variant and the Lebesgue function.
//
// With w_j the normalized Gauss weights for (1 - t^2)^((d-1)/2), the discrete
// operator evaluated here is
//
//   A_n f(x) = sum_nu lambda_nu sum_j W_j Rf(xi_nu, t_j) Phi_n(t_j, <x, xi_nu>),
//   W_j      = w_j / (b_(d-1) (1 - t_j^2)^((d-1)/2)),
//
// which is what the Radon-side quadrature of the partial sum reduces to after
// the weight and c_(d/2) b_d = b_(d-1) are collected. For d = 2 type II it
// expands to sum R(cos theta_j) T_(j,nu)(x) with the usual T_(j,nu).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "oped/grid.hpp"
#include "oped/radon.hpp"

namespace oped {

/// C-infinity taper: 1 on [0,1], 0 on [2,inf), g(2-t)/(g(2-t)+g(t-1)) with
/// g(s) = exp(-1/s) in between.
double eta(double t);

enum class Filter { None, Eta };
enum class Summation { Sequential, Pairwise };

std::string to_string(Filter f);
std::string to_string(Summation s);
Filter parse_filter(const std::string& s);
Summation parse_summation(const std::string& s);

/// Gegenbauer data for Phi_n (or its eta-filtered version) in dimension d.
/// Unfiltered: terms k = 0..n with weight 1. Filtered: k = 0..2n with eta(k/n).
struct KernelTable {
  int dim = 0;
  int order = 0;
  Filter filter = Filter::None;
  std::vector<double> eta;     // eta_k
  std::vector<double> factor;  // eta_k (k + d/2) / (d/2)
  std::vector<double> alpha;   // C_k^(d/2) recurrence, see kernels::SeriesArgs
  std::vector<double> beta;

  [[nodiscard]] int max_degree() const { return static_cast<int>(factor.size()) - 1; }
  [[nodiscard]] double phi(double t, double u) const;

  static KernelTable make(int dim, int order, Filter filter = Filter::None);
};

/// sum_k eta_k (k + d/2)/(d/2) C_k^(d/2)(t) C_k^(d/2)(u).
double phi_kernel(int d, int n, double t, double u, Filter filter = Filter::None);

struct ReconstructionConfig {
  /// Expected geometry order (m or n); 0 accepts the sinogram's own.
  int order = 0;
  /// Expected scan type; Custom accepts any.
  ScanType type = ScanType::Custom;
  Filter filter = Filter::None;
  int resolution = 128;
  Summation summation = Summation::Pairwise;
  int threads = 0;
};

/// Checks the sinogram against the config and returns the kernel order: the
/// geometry's operator degree unfiltered, half of it (rounded down) filtered.
int reconstruction_order(const Sinogram& s, const ReconstructionConfig& config);

/// A_n f at arbitrary points given as coords[axis][i].
std::vector<double> reconstruct_points(const Sinogram& s, const ReconstructionConfig& config,
                                       const std::vector<std::vector<double>>& coords);

/// A_n f on a masked grid; points outside the ball are left at zero.
ImageGrid reconstruct_grid(const Sinogram& s, const ReconstructionConfig& config);

/// Two-dimensional OPED of type I or II.
ImageGrid oped2d(const Sinogram& s, const ReconstructionConfig& config);
/// Three-dimensional OPED on the product cubature.
ImageGrid oped3d(const Sinogram& s, const ReconstructionConfig& config);

/// S_n^eta from a geometry whose operator degree is at least 2n.
ImageGrid smoothed_reconstruct(const Sinogram& s, int n, const ReconstructionConfig& config);

using RadonProfile = std::function<double(std::span<const double> xi, double t)>;

/// S_n f(x) = sum_nu lambda_nu b_d^-1 int Rf(xi_nu, t) Phi_n(t, <x, xi_nu>) dt with
/// the t-integral done by composite Gauss-Legendre in theta (t = cos theta),
/// `refinement` panels of 8 points. The cubature must have degree >= 2n.
double semi_discrete_partial_sum(const RadonProfile& radon, const SphericalCubature& cubature, int n,
                                 std::span<const double> x, int refinement = 32, Filter filter = Filter::None);

/// Lambda_n(x) = sum_nu lambda_nu sum_j w_j |Phi_n(t_j, <x, xi_nu>)|, the exact
/// sup-norm of f -> A_n f(x) over |f| <= 1 on B^d.
double lebesgue_function(const ScanGeometry& g, int n, std::span<const double> x, Filter filter = Filter::None);

/// Lambda_n over the masked points of a grid.
ImageGrid lebesgue_grid(const ScanGeometry& g, int n, int resolution, Filter filter = Filter::None, int threads = 0);

/// Data weights W_j of the header comment.
std::vector<double> radon_node_weights(const ScanGeometry& g);

}  // namespace oped
