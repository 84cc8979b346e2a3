#include "oped/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oped/errors.hpp"

namespace oped {

namespace {

constexpr double kPi = std::numbers::pi;

void require_degree(int n) {
  if (n < 0) throw ValidationError("polynomial degree must be non-negative, got " + std::to_string(n));
}

void require_jacobi_parameters(double alpha, double beta) {
  if (!(alpha > -1.0) || !(beta > -1.0)) {
    throw ValidationError("Jacobi parameters must satisfy alpha, beta > -1");
  }
}

}  // namespace

double pochhammer(double a, int k) {
  double p = 1.0;
  for (int i = 0; i < k; ++i) p *= a + i;
  return p;
}

std::vector<double> gegenbauer_all(double lambda, int n, double t) {
  if (!(lambda > 0.0)) throw ValidationError("Gegenbauer parameter lambda must be positive");
  require_degree(n);
  std::vector<double> c(static_cast<std::size_t>(n) + 1);
  c[0] = 1.0;
  if (n >= 1) c[1] = 2.0 * lambda * t;
  for (int k = 1; k < n; ++k) {
    c[k + 1] = (2.0 * (k + lambda) * t * c[k] - (k + 2.0 * lambda - 1.0) * c[k - 1]) / (k + 1.0);
  }
  return c;
}

double gegenbauer(double lambda, int n, double t) {
  if (!(lambda > 0.0)) throw ValidationError("Gegenbauer parameter lambda must be positive");
  require_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * lambda * t;
  for (int k = 1; k < n; ++k) {
    const double next = (2.0 * (k + lambda) * t * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double gegenbauer_at_one(double lambda, int n) {
  double v = 1.0;
  for (int i = 0; i < n; ++i) v *= (2.0 * lambda + i) / (i + 1.0);
  return v;
}

double chebyshev_u(int n, double t) {
  require_degree(n);
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_t(int n, double t) {
  require_degree(n);
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 1; k < n; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi(double alpha, double beta, int n, double t) {
  require_jacobi_parameters(alpha, beta);
  require_degree(n);
  if (n == 0) return 1.0;
  const double ab = alpha + beta;
  double prev = 1.0;
  double cur = 0.5 * (2.0 * (alpha + 1.0) + (ab + 2.0) * (t - 1.0));
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    const double a1 = 2.0 * (k + 1.0) * (k + ab + 1.0) * s;
    const double a2 = (s + 1.0) * (alpha * alpha - beta * beta);
    const double a3 = s * (s + 1.0) * (s + 2.0);
    const double a4 = 2.0 * (k + alpha) * (k + beta) * (s + 2.0);
    const double next = ((a2 + a3 * t) * cur - a4 * prev) / a1;
    prev = cur;
    cur = next;
  }
  return cur;
}

double jacobi_norm(double alpha, double beta, int n) {
  require_jacobi_parameters(alpha, beta);
  require_degree(n);
  if (n == 0) return 1.0;
  const double ab = alpha + beta;
  double h = 1.0;
  for (int i = 0; i < n; ++i) {
    h *= (alpha + 1.0 + i) * (beta + 1.0 + i) / ((i + 1.0) * (ab + 2.0 + i));
  }
  return h * (ab + n + 1.0) / (ab + 2.0 * n + 1.0);
}

double jacobi_orthonormal(double alpha, double beta, int n, double t) {
  return jacobi(alpha, beta, n, t) / std::sqrt(jacobi_norm(alpha, beta, n));
}

double gegenbauer_norm(double lambda, int k) {
  if (!(lambda > 0.0)) throw ValidationError("Gegenbauer parameter lambda must be positive");
  require_degree(k);
  // lambda (2 lambda)_k / ((k + lambda) k!), accumulated as a product of ratios.
  double h = lambda / (k + lambda);
  for (int i = 0; i < k; ++i) h *= (2.0 * lambda + i) / (i + 1.0);
  return h;
}

double sphere_area(int d) {
  if (d < 1) throw ValidationError("dimension must be at least 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double ball_volume(int d) {
  if (d < 0) throw ValidationError("dimension must be non-negative");
  if (d == 0) return 1.0;
  return sphere_area(d) / d;
}

BallConstants BallConstants::of(int dimension) {
  if (dimension < 2) throw ValidationError("ball dimension must be at least 2");
  return {dimension, oped::sphere_area(dimension), oped::ball_volume(dimension)};
}

double BallConstants::gegenbauer_normalizer(double lambda) {
  if (!(lambda > -0.5)) throw ValidationError("Gegenbauer weight requires lambda > -1/2");
  return std::exp(std::lgamma(lambda + 1.0) - std::lgamma(0.5) - std::lgamma(lambda + 0.5));
}

double BallConstants::jacobi_normalizer(double alpha, double beta) {
  require_jacobi_parameters(alpha, beta);
  return std::exp(std::lgamma(alpha + beta + 2.0) - std::lgamma(alpha + 1.0) - std::lgamma(beta + 1.0) -
                  (alpha + beta + 1.0) * std::log(2.0));
}

double normalized_moment(double exponent, int p) {
  if (!(exponent > -1.0)) throw ValidationError("weight exponent must exceed -1");
  require_degree(p);
  if (p % 2 == 1) return 0.0;
  // B((p+1)/2, a+1) / B(1/2, a+1)
  return std::exp(std::lgamma(0.5 * (p + 1)) + std::lgamma(exponent + 1.5) - std::lgamma(0.5) -
                  std::lgamma(0.5 * (p + 1) + exponent + 1.0));
}

QuadratureRule gauss_gegenbauer_rule(double exponent, int npoints) {
  if (npoints < 1) throw ValidationError("quadrature needs at least one point");
  QuadratureRule rule;
  rule.weight_exponent = exponent;
  rule.exact_degree = 2 * npoints - 1;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);

  if (exponent == -0.5) {
    for (int j = 0; j < npoints; ++j) {
      // Increasing order: the largest angle first.
      rule.nodes[j] = std::cos((npoints - j - 0.5) * kPi / npoints);
      rule.weights[j] = 1.0 / npoints;
    }
    return rule;
  }
  if (!(exponent > -0.5)) {
    throw ValidationError("Gauss-Gegenbauer rules are provided for exponents >= -1/2");
  }

  const double lambda = exponent + 0.5;
  const int n = npoints;
  constexpr double kTolerance = 1e-14;
  constexpr int kMaxIterations = 100;

  // Roots come in +/- pairs. Solve for the non-negative half (largest first),
  // mirror the rest.
  std::vector<double> upper;
  const int half = (n + 1) / 2;
  for (int j = 0; j < half; ++j) {
    double t = std::cos(kPi * (j + 0.5 + 0.5 * lambda) / (n + lambda));
    if (n % 2 == 1 && j == half - 1) {
      t = 0.0;
      upper.push_back(t);
      break;
    }
    bool converged = false;
    for (int it = 0; it < kMaxIterations; ++it) {
      // C_n and C_{n-1} at t, then derivative from
      // (1 - t^2) C_n' = -n t C_n + (n + 2 lambda - 1) C_{n-1}.
      double prev = 1.0;
      double cur = 2.0 * lambda * t;
      if (n == 1) {
        prev = 1.0;
      } else {
        for (int k = 1; k < n; ++k) {
          const double next = (2.0 * (k + lambda) * t * cur - (k + 2.0 * lambda - 1.0) * prev) / (k + 1.0);
          prev = cur;
          cur = next;
        }
      }
      const double deriv = (-n * t * cur + (n + 2.0 * lambda - 1.0) * prev) / (1.0 - t * t);
      const double step = cur / deriv;
      t -= step;
      if (std::abs(step) <= kTolerance * std::max(1.0, std::abs(t))) {
        converged = true;
        break;
      }
    }
    if (!converged || !std::isfinite(t)) {
      throw NumericalError("Gauss-Gegenbauer node search did not converge for degree " + std::to_string(n));
    }
    upper.push_back(t);
  }

  // upper is decreasing; lay out increasing nodes.
  for (int j = 0; j < half; ++j) {
    rule.nodes[n - 1 - j] = upper[j];
    rule.nodes[j] = -upper[j];
  }
  for (int j = 1; j < n; ++j) {
    if (!(rule.nodes[j] > rule.nodes[j - 1])) {
      throw NumericalError("Gauss-Gegenbauer node search produced repeated roots for degree " + std::to_string(n));
    }
  }

  // w_j proportional to (1 - t_j^2) / C_{n-1}(t_j)^2; normalize afterwards.
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = rule.nodes[j];
    const double c = n == 1 ? 1.0 : gegenbauer(lambda, n - 1, t);
    rule.weights[j] = (1.0 - t * t) / (c * c);
    total += rule.weights[j];
  }
  for (double& w : rule.weights) w /= total;
  // Symmetrize so paired weights are bit-identical.
  for (int j = 0; j < n / 2; ++j) {
    const double w = 0.5 * (rule.weights[j] + rule.weights[n - 1 - j]);
    rule.weights[j] = w;
    rule.weights[n - 1 - j] = w;
  }
  return rule;
}

QuadratureRule gauss_legendre_rule(int npoints) {
  return gauss_gegenbauer_rule(0.0, npoints);
}

QuadratureRule folded_chebyshev_rule(int npoints) {
  if (npoints < 2) throw ValidationError("folded Chebyshev rule needs at least two points");
  QuadratureRule rule;
  rule.weight_exponent = 0.5;
  rule.exact_degree = 2 * npoints - 3;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  for (int j = 0; j < npoints; ++j) {
    const double psi = (npoints - j - 0.5) * kPi / npoints;
    const double s = std::sin(psi);
    rule.nodes[j] = std::cos(psi);
    rule.weights[j] = 2.0 * s * s / npoints;
  }
  return rule;
}

}  // namespace oped
