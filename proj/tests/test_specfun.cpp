#include <doctest.h>

#include <cmath>
#include <random>

#include "oped/errors.hpp"
#include "oped/specfun.hpp"
#include "support.hpp"

using namespace oped;
using oped::test::kPi;

TEST_CASE("gegenbauer_all oracles") {
  auto c = gegenbauer_all(1.0, 0, 0.37);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == 1.0);

  c = gegenbauer_all(1.0, 3, 0.5);
  const double th = std::acos(0.5);
  CHECK(c[3] == doctest::Approx(std::sin(4 * th) / std::sin(th)).epsilon(1e-14));
  CHECK(c[3] == doctest::Approx(-1.0).epsilon(1e-14));

  c = gegenbauer_all(1.0, 3, 1.0);
  CHECK(c[3] == doctest::Approx(4.0).epsilon(1e-14));
  for (int d = 2; d <= 3; ++d) {
    for (int n = 0; n <= 12; ++n) {
      CHECK(gegenbauer(0.5 * d, n, 1.0) == doctest::Approx(pochhammer(d, n) / std::tgamma(n + 1.0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("gegenbauer lambda = 1 matches the sine quotient") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.999, 0.999);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = u(rng);
    const double th = std::acos(t);
    const auto c = gegenbauer_all(1.0, 20, t);
    for (int k = 0; k <= 20; ++k) worst = std::max(worst, std::abs(c[k] - std::sin((k + 1) * th) / std::sin(th)));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("chebyshev oracles") {
  CHECK(chebyshev_t(5, std::cos(0.3)) == doctest::Approx(std::cos(1.5)).epsilon(1e-14));
  for (double t : {-1.0, -0.3, 0.0, 0.8, 1.0}) CHECK(chebyshev_u(0, t) == 1.0);
  const double th = std::acos(0.9);
  CHECK(chebyshev_u(4, 0.9) == doctest::Approx(std::sin(5 * th) / std::sin(th)).epsilon(1e-13));
  for (int n = 0; n < 15; ++n) {
    for (double t = -1.0; t <= 1.0; t += 0.125) {
      CHECK(std::abs(chebyshev_u(n, t) - gegenbauer(1.0, n, t)) < 1e-13);
      CHECK(std::abs(chebyshev_t(n, t) - std::cos(n * std::acos(t))) < 1e-13);
    }
  }
}

TEST_CASE("jacobi_orthonormal oracles") {
  CHECK(jacobi_orthonormal(0.3, 1.7, 0, 0.2) == doctest::Approx(1.0).epsilon(1e-14));
  for (double beta : {0.0, 0.5, 1.5, 3.0}) {
    for (int n = 0; n < 8; ++n) {
      CHECK(jacobi(0.0, beta, n, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(jacobi_orthonormal(0.0, beta, n, 1.0) == doctest::Approx(1.0 / std::sqrt(jacobi_norm(0.0, beta, n))).epsilon(1e-13));
    }
  }
  // Gram entries by exact rules: t = 2u^2 - 1 turns (1 + t)^b dt into a polynomial
  // in u for half-integer b, and the Gauss-Gegenbauer rule covers a = b = 1/2
  const auto gl = gauss_legendre_rule(20);
  for (double b : {0.5, 1.5}) {
    const double c = BallConstants::jacobi_normalizer(0.0, b);
    double g23 = 0.0, g22 = 0.0;
    for (std::size_t j = 0; j < gl.size(); ++j) {
      const double u = 0.5 * (gl.nodes[j] + 1.0);
      const double t = 2.0 * u * u - 1.0;
      const double w = gl.weights[j] * c * std::pow(2.0 * u * u, b) * 4.0 * u;
      g23 += w * jacobi_orthonormal(0.0, b, 2, t) * jacobi_orthonormal(0.0, b, 3, t);
      g22 += w * jacobi_orthonormal(0.0, b, 2, t) * jacobi_orthonormal(0.0, b, 2, t);
    }
    CHECK(std::abs(g23) < 1e-12);
    CHECK(g22 == doctest::Approx(1.0).epsilon(1e-12));
  }
  const auto gg = gauss_gegenbauer_rule(0.5, 8);
  double g23 = 0.0, g22 = 0.0;
  for (std::size_t j = 0; j < gg.size(); ++j) {
    g23 += gg.weights[j] * jacobi_orthonormal(0.5, 0.5, 2, gg.nodes[j]) * jacobi_orthonormal(0.5, 0.5, 3, gg.nodes[j]);
    g22 += gg.weights[j] * std::pow(jacobi_orthonormal(0.5, 0.5, 2, gg.nodes[j]), 2);
  }
  CHECK(std::abs(g23) < 1e-12);
  CHECK(g22 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(jacobi(-1.0, 0.0, 2, 0.1), ValidationError);
}

TEST_CASE("gegenbauer_norm oracles") {
  for (double l : {0.5, 1.0, 1.5, 2.5}) CHECK(gegenbauer_norm(l, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gegenbauer_norm(1.0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gegenbauer_norm(1.5, 1) == doctest::Approx(9.0 / 5.0).epsilon(1e-15));
  // quadrature cross-check against the normalized weight
  for (double l : {1.0, 1.5}) {
    const auto g = gauss_gegenbauer_rule(l - 0.5, 20);
    for (int k = 0; k <= 10; ++k) {
      const double h = g.integrate([&](double t) { return std::pow(gegenbauer(l, k, t), 2); });
      CHECK(h == doctest::Approx(gegenbauer_norm(l, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constants") {
  CHECK(ball_volume(2) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK(ball_volume(3) == doctest::Approx(4 * kPi / 3).epsilon(1e-15));
  CHECK(sphere_area(2) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
  // c_lambda normalizes (1 - t^2)^(lambda - 1/2)
  CHECK(BallConstants::gegenbauer_normalizer(1.0) == doctest::Approx(2 / kPi).epsilon(1e-15));
  CHECK(BallConstants::gegenbauer_normalizer(1.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(BallConstants::gegenbauer_normalizer(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  // c_(d/2) b_d = b_(d-1)
  for (int d = 2; d <= 5; ++d) {
    CHECK(BallConstants::gegenbauer_normalizer(0.5 * d) * ball_volume(d) == doctest::Approx(ball_volume(d - 1)).epsilon(1e-14));
  }
}

TEST_CASE("gauss_gegenbauer_rule oracles") {
  auto r = gauss_gegenbauer_rule(0.5, 2);
  CHECK(r.nodes[0] == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(r.nodes[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(r.exact_degree == 3);

  for (int m : {1, 2, 5}) {
    r = gauss_gegenbauer_rule(-0.5, 2 * m + 1);
    for (int j = 0; j <= 2 * m; ++j) {
      const double psi = (j + 0.5) * kPi / (2 * m + 1);
      // nodes are sorted increasingly
      CHECK(r.nodes[2 * m - j] == doctest::Approx(std::cos(psi)).epsilon(1e-14));
      CHECK(r.weights[j] == doctest::Approx(1.0 / (2 * m + 1)).epsilon(1e-14));
    }
  }

  r = gauss_gegenbauer_rule(1.0, 4);
  CHECK(r.integrate([](double t) { return t * t; }) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_THROWS_AS(gauss_gegenbauer_rule(0.5, 0), ValidationError);
}

TEST_CASE("gauss_legendre_rule oracles") {
  auto r = gauss_legendre_rule(1);
  CHECK(r.nodes[0] == doctest::Approx(0.0));
  CHECK(r.weights[0] == doctest::Approx(1.0));
  r = gauss_legendre_rule(2);
  CHECK(r.nodes[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  r = gauss_legendre_rule(5);
  CHECK(r.integrate([](double t) { return std::pow(t, 4); }) == doctest::Approx(0.2).epsilon(1e-13));
}

TEST_CASE("every rule passes its moment suite") {
  auto check_rule = [](const QuadratureRule& r) {
    double sum = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(r.weights[j] > 0.0);
      if (j) CHECK(r.nodes[j] > r.nodes[j - 1]);
      sum += r.weights[j];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    for (int p = 0; p <= r.exact_degree; ++p) {
      const double q = r.integrate([&](double t) { return std::pow(t, p); });
      CHECK(std::abs(q - normalized_moment(r.weight_exponent, p)) < 1e-10);
    }
  };
  for (int n = 1; n <= 40; n += 3) {
    check_rule(gauss_legendre_rule(n));
    check_rule(gauss_gegenbauer_rule(-0.5, n));
    check_rule(gauss_gegenbauer_rule(0.5, n));
    check_rule(gauss_gegenbauer_rule(1.0, n));
  }
  for (int n = 2; n <= 41; n += 3) check_rule(folded_chebyshev_rule(n));
}

TEST_CASE("folded Chebyshev rule") {
  const int n = 9;
  const auto r = folded_chebyshev_rule(n);
  CHECK(r.exact_degree == 2 * n - 3);
  CHECK(r.weight_exponent == 0.5);
  for (int j = 0; j < n; ++j) {
    const double psi = (j + 0.5) * kPi / n;
    CHECK(r.weights[n - 1 - j] == doctest::Approx(2 * std::pow(std::sin(psi), 2) / n).epsilon(1e-14));
  }
}

TEST_CASE("normalized moments") {
  CHECK(normalized_moment(0.0, 2) == doctest::Approx(1.0 / 3));
  CHECK(normalized_moment(1.0, 2) == doctest::Approx(0.2));
  CHECK(normalized_moment(0.5, 2) == doctest::Approx(0.25));
  CHECK(normalized_moment(0.5, 3) == 0.0);
}
