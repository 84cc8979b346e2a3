#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "oped/grid.hpp"
#include "oped/phantom.hpp"

namespace oped::test {

inline constexpr double kPi = std::numbers::pi;

/// sigma_d^-1 int_S x^a, a has d entries.
inline double sphere_moment(std::span<const int> a) {
  double log_num = 0.0;
  int total = 0;
  for (int e : a) {
    if (e % 2) return 0.0;
    log_num += std::lgamma(0.5 * (e + 1));
    total += e;
  }
  const double d = static_cast<double>(a.size());
  const double log_surface = std::log(2.0) + 0.5 * d * std::log(kPi) - std::lgamma(0.5 * d);
  return std::exp(std::log(2.0) + log_num - std::lgamma(0.5 * (total + d)) - log_surface);
}

inline std::vector<double> random_direction(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<double> v(d);
  double s = 0.0;
  for (auto& x : v) {
    x = n(rng);
    s += x * x;
  }
  for (auto& x : v) x /= std::sqrt(s);
  return v;
}

/// Uniform point in the ball of radius r.
inline std::vector<double> random_ball_point(int d, std::mt19937_64& rng, double r = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto v = random_direction(d, rng);
  const double rho = r * std::pow(u(rng), 1.0 / d);
  for (auto& x : v) x *= rho;
  return v;
}

inline double max_masked_error(const ImageGrid& g, const PointFunction& f) {
  double e = 0.0;
  double x[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.mask[i]) continue;
    g.point(i, x);
    e = std::max(e, std::abs(g.values[i] - f(std::span<const double>(x, g.dim))));
  }
  return e;
}

}  // namespace oped::test
