#pragma once

// Classical orthogonal polynomials on [-1,1], their normalization constants,
// ball/sphere constants and Gauss quadrature rules.
//
// Conventions
//   C_k^lambda  Gegenbauer polynomial, standard normalization C_k(1) = (2 lambda)_k / k!
//   h_k^lambda  lambda (2 lambda)_k / ((k + lambda) k!), the squared norm of C_k
//               under the *normalized* weight c_lambda (1 - t^2)^(lambda - 1/2)
//   c_lambda    1 / int (1 - t^2)^(lambda - 1/2) dt
//
// Every QuadratureRule is stored against a normalized weight, so its weights
// add up to one.

#include <cstddef>
#include <span>
#include <vector>

namespace oped {

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1).
double pochhammer(double a, int k);

/// C_0^lambda(t) .. C_n^lambda(t). lambda must be positive.
std::vector<double> gegenbauer_all(double lambda, int n, double t);

/// C_n^lambda(t) alone.
double gegenbauer(double lambda, int n, double t);

/// C_n^lambda(1) = (2 lambda)_n / n!.
double gegenbauer_at_one(double lambda, int n);

double chebyshev_u(int n, double t);
double chebyshev_t(int n, double t);

/// Jacobi polynomial P_n^(alpha,beta)(t) with P_n(1) = (alpha+1)_n / n!.
double jacobi(double alpha, double beta, int n, double t);

/// h_n^(alpha,beta): squared norm of P_n under the normalized Jacobi weight.
double jacobi_norm(double alpha, double beta, int n);

/// Orthonormal Jacobi polynomial p_n = h_n^(-1/2) P_n.
double jacobi_orthonormal(double alpha, double beta, int n, double t);

/// h_k^lambda.
double gegenbauer_norm(double lambda, int k);

/// Geometric constants of B^d and S^(d-1).
struct BallConstants {
  int dimension = 0;
  double sphere_area = 0.0;  // sigma_d
  double ball_volume = 0.0;  // b_d

  static BallConstants of(int dimension);

  /// c_lambda = Gamma(lambda + 1) / (Gamma(1/2) Gamma(lambda + 1/2)).
  static double gegenbauer_normalizer(double lambda);

  /// c_(alpha,beta) = 1 / int (1-t)^alpha (1+t)^beta dt.
  static double jacobi_normalizer(double alpha, double beta);
};

double sphere_area(int d);
double ball_volume(int d);

/// Nodes and normalized weights on (-1,1) for the weight (1 - t^2)^weight_exponent.
struct QuadratureRule {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // positive, sum to one
  double weight_exponent = 0.0;
  int exact_degree = 0;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  /// sum_j w_j f(t_j).
  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * f(nodes[j]);
    return s;
  }
};

/// Normalized moment c * int t^p (1 - t^2)^exponent dt, exponent > -1.
double normalized_moment(double exponent, int p);

/// Gauss rule for the weight (1 - t^2)^exponent. exponent = -1/2 gives the
/// Chebyshev first-kind rule in closed form; other exponents (> -1/2) are found
/// by Newton iteration on the Gegenbauer polynomial of degree npoints.
QuadratureRule gauss_gegenbauer_rule(double exponent, int npoints);

/// Gauss-Legendre rule, weights normalized against dt/2.
QuadratureRule gauss_legendre_rule(int npoints);

/// Chebyshev first-kind nodes cos((j+1/2) pi / npoints) used to integrate
/// against sqrt(1 - t^2): the factor 1 - t_j^2 is folded into the weights,
/// which become 2 sin^2(psi_j) / npoints. Exact to degree 2 npoints - 3.
QuadratureRule folded_chebyshev_rule(int npoints);

}  // namespace oped
