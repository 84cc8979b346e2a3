#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "oped/errors.hpp"
#include "oped/geometry.hpp"
#include "support.hpp"

using namespace oped;
using oped::test::kPi;
using oped::test::sphere_moment;

namespace {

double integrate_monomial(const SphericalCubature& c, std::span<const int> a) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    auto p = c.point(i);
    double v = c.weights[i];
    for (int k = 0; k < c.dim; ++k) v *= std::pow(p[k], a[k]);
    s += v;
  }
  return s;
}

/// Largest moment error over monomials of total degree <= degree (even only if requested).
double moment_error(const SphericalCubature& c, int degree, bool even_only) {
  double worst = 0.0;
  std::array<int, 3> a{0, 0, 0};
  for (a[0] = 0; a[0] <= degree; ++a[0]) {
    for (a[1] = 0; a[0] + a[1] <= degree; ++a[1]) {
      for (a[2] = 0; a[0] + a[1] + a[2] <= degree; ++a[2]) {
        if (c.dim == 2 && a[2] > 0) break;
        if (even_only && (a[0] + a[1] + a[2]) % 2) continue;
        const std::span<const int> e(a.data(), c.dim);
        worst = std::max(worst, std::abs(integrate_monomial(c, e) - sphere_moment(e)));
      }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("circle_directions oracles") {
  auto c = circle_directions(0);
  REQUIRE(c.size() == 1);
  CHECK(c.point(0)[0] == 1.0);
  CHECK(c.point(0)[1] == 0.0);
  CHECK(c.weights[0] == 1.0);

  c = circle_directions(2);
  REQUIRE(c.size() == 5);
  for (int nu = 0; nu < 5; ++nu) {
    CHECK(c.point(nu)[0] == doctest::Approx(std::cos(2 * nu * kPi / 5)).epsilon(1e-15));
    CHECK(c.point(nu)[1] == doctest::Approx(std::sin(2 * nu * kPi / 5)).epsilon(1e-15));
  }
  c = circle_directions(3);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * c.point(i)[0] * c.point(i)[0];
  CHECK(s == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("half_circle_directions oracles") {
  auto c = half_circle_directions(1);
  REQUIRE(c.size() == 2);
  CHECK(c.point(1)[0] == doctest::Approx(0.0));
  CHECK(c.point(1)[1] == doctest::Approx(1.0));
  CHECK(c.weights[0] == 0.5);

  auto integrate = [](const SphericalCubature& cub, auto f) {
    double s = 0.0;
    for (std::size_t i = 0; i < cub.size(); ++i) s += cub.weights[i] * f(std::atan2(cub.point(i)[1], cub.point(i)[0]));
    return s;
  };
  c = half_circle_directions(2);
  CHECK(integrate(c, [](double t) { return std::pow(std::cos(t), 4); }) == doctest::Approx(3.0 / 8).epsilon(1e-12));
  c = half_circle_directions(4);
  CHECK(integrate(c, [](double t) { return std::pow(std::cos(t) * std::sin(t), 2); }) ==
        doctest::Approx(1.0 / 8).epsilon(1e-12));
}

TEST_CASE("sphere_product_cubature oracles") {
  auto c = sphere_product_cubature(0);
  REQUIRE(c.size() == 1);
  CHECK(c.point(0)[0] == doctest::Approx(0.0));
  CHECK(c.point(0)[1] == doctest::Approx(1.0));
  CHECK(c.point(0)[2] == doctest::Approx(0.0));
  CHECK(c.weights[0] == doctest::Approx(1.0));

  c = sphere_product_cubature(2);
  CHECK(c.size() == 9);
  const std::array<int, 3> z2{0, 0, 2};
  CHECK(integrate_monomial(c, z2) == doctest::Approx(1.0 / 3).epsilon(1e-12));
  c = sphere_product_cubature(3);
  const std::array<int, 3> xy{2, 2, 0};
  CHECK(integrate_monomial(c, xy) == doctest::Approx(1.0 / 15).epsilon(1e-12));
  for (int n = 0; n <= 64; ++n) {
    const auto cc = sphere_product_cubature(n);
    for (double w : cc.weights) REQUIRE(w > 0.0);
  }
}

TEST_CASE("cubatures are exact on even polynomials to their degree") {
  for (int m = 0; m <= 8; ++m) CHECK(moment_error(circle_directions(m), circle_directions(m).degree, true) < 1e-10);
  for (int n = 0; n <= 16; ++n) CHECK(moment_error(half_circle_directions(n), 2 * n, true) < 1e-10);
  for (int n = 0; n <= 10; ++n) CHECK(moment_error(sphere_product_cubature(n), 2 * n, true) < 1e-10);
}

TEST_CASE("half-circle rules are not exact on odd polynomials") {
  const std::array<int, 2> odd{0, 1};
  CHECK(std::abs(integrate_monomial(half_circle_directions(3), odd)) > 0.1);
}

TEST_CASE("full sphere cubatures are exact on every polynomial to their degree") {
  for (int deg = 0; deg <= 12; ++deg) {
    CHECK(moment_error(full_sphere_cubature(2, deg), deg, false) < 1e-10);
    CHECK(moment_error(full_sphere_cubature(3, deg), deg, false) < 1e-10);
  }
}

TEST_CASE("cubature JSON round trip") {
  const auto c = sphere_product_cubature(3);
  const auto back = SphericalCubature::from_json(c.to_json());
  CHECK(back.dim == 3);
  CHECK(back.degree == 6);
  CHECK(back.points == c.points);
  CHECK(back.weights == c.weights);
  CHECK_THROWS_AS(SphericalCubature::from_json(nlohmann::json{{"d", 2}}), ValidationError);
}

TEST_CASE("orthogonal_frame") {
  const std::vector<double> e1{1.0, 0.0, 0.0};
  auto q = orthogonal_frame(e1);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) CHECK(q(r, c) == doctest::Approx(r == c ? 1.0 : 0.0));
  }
  const std::vector<double> e2{0.0, 1.0};
  q = orthogonal_frame(e2);
  CHECK(q(0, 0) == doctest::Approx(0.0));
  CHECK(q(0, 1) == doctest::Approx(1.0));
  CHECK(q(1, 0) == doctest::Approx(-1.0));
  CHECK(q(1, 1) == doctest::Approx(0.0));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    auto xi = oped::test::random_direction(3, rng);
    q = orthogonal_frame(xi);
    for (int c = 0; c < 3; ++c) CHECK(q(0, c) == doctest::Approx(xi[c]).epsilon(1e-14));
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += q(a, c) * q(b, c);
        CHECK(std::abs(s - (a == b ? 1.0 : 0.0)) < 1e-13);
      }
    }
    const auto again = orthogonal_frame(xi);
    CHECK(again.matrix == q.matrix);
  }
  const std::vector<double> zero{0.0, 0.0};
  CHECK_THROWS_AS(orthogonal_frame(zero), ValidationError);
}
