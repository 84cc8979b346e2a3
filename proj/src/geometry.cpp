#include "oped/geometry.hpp"

#include <cmath>
#include <numbers>

#include "oped/errors.hpp"
#include "oped/specfun.hpp"

namespace oped {

namespace {
constexpr double kPi = std::numbers::pi;

void require_order(int n, const char* what) {
  if (n < 0) throw ValidationError(std::string(what) + " order must be non-negative");
}
}  // namespace

std::vector<double> circle_point(double theta) {
  return {std::cos(theta), std::sin(theta)};
}

SphericalCubature circle_directions(int m) {
  require_order(m, "circle_directions");
  SphericalCubature c;
  c.dim = 2;
  c.degree = 4 * m;
  const int count = 2 * m + 1;
  c.points.reserve(2 * count);
  c.weights.assign(count, 1.0 / count);
  for (int nu = 0; nu < count; ++nu) {
    const double phi = 2.0 * nu * kPi / count;
    c.points.push_back(std::cos(phi));
    c.points.push_back(std::sin(phi));
  }
  return c;
}

SphericalCubature half_circle_directions(int n) {
  require_order(n, "half_circle_directions");
  SphericalCubature c;
  c.dim = 2;
  c.degree = 2 * n;
  const int count = n + 1;
  c.points.reserve(2 * count);
  c.weights.assign(count, 1.0 / count);
  for (int nu = 0; nu < count; ++nu) {
    const double theta = nu * kPi / count;
    c.points.push_back(std::cos(theta));
    c.points.push_back(std::sin(theta));
  }
  return c;
}

SphericalCubature sphere_product_cubature(int n) {
  require_order(n, "sphere_product_cubature");
  const QuadratureRule legendre = gauss_legendre_rule(n + 1);
  SphericalCubature c;
  c.dim = 3;
  c.degree = 2 * n;
  for (int k = 0; k <= n; ++k) {
    const double z = legendre.nodes[k];
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (int nu = 0; nu <= n; ++nu) {
      const double az = nu * kPi / (n + 1);
      c.points.push_back(std::sin(az) * s);
      c.points.push_back(std::cos(az) * s);
      c.points.push_back(z);
      c.weights.push_back(legendre.weights[k] / (n + 1));
    }
  }
  return c;
}

SphericalCubature full_sphere_cubature(int dim, int degree) {
  if (degree < 0) throw ValidationError("cubature degree must be non-negative");
  SphericalCubature c;
  c.dim = dim;
  c.degree = degree;
  // Trapezoid rule with M points integrates trigonometric polynomials of degree < M.
  const int azimuths = degree + 1;
  if (dim == 2) {
    c.weights.assign(azimuths, 1.0 / azimuths);
    for (int nu = 0; nu < azimuths; ++nu) {
      const double phi = 2.0 * nu * kPi / azimuths;
      c.points.push_back(std::cos(phi));
      c.points.push_back(std::sin(phi));
    }
    return c;
  }
  if (dim == 3) {
    const QuadratureRule legendre = gauss_legendre_rule(degree / 2 + 1);
    for (std::size_t k = 0; k < legendre.size(); ++k) {
      const double z = legendre.nodes[k];
      const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int nu = 0; nu < azimuths; ++nu) {
        const double phi = 2.0 * nu * kPi / azimuths;
        c.points.push_back(s * std::cos(phi));
        c.points.push_back(s * std::sin(phi));
        c.points.push_back(z);
        c.weights.push_back(legendre.weights[k] / azimuths);
      }
    }
    return c;
  }
  throw ValidationError("full sphere cubature is provided for d = 2 and d = 3 only");
}

nlohmann::json SphericalCubature::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    auto p = point(i);
    pts.push_back(std::vector<double>(p.begin(), p.end()));
  }
  return {{"d", dim}, {"degree", degree}, {"points", pts}, {"weights", weights}};
}

SphericalCubature SphericalCubature::from_json(const nlohmann::json& doc) {
  SphericalCubature c;
  try {
    c.dim = doc.at("d").get<int>();
    c.degree = doc.at("degree").get<int>();
    c.weights = doc.at("weights").get<std::vector<double>>();
    const auto& pts = doc.at("points");
    if (pts.size() != c.weights.size()) throw ValidationError("cubature points and weights differ in length");
    for (const auto& p : pts) {
      auto v = p.get<std::vector<double>>();
      if (static_cast<int>(v.size()) != c.dim) throw ValidationError("cubature point has wrong dimension");
      c.points.insert(c.points.end(), v.begin(), v.end());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed cubature document: ") + e.what());
  }
  return c;
}

OrthogonalFrame orthogonal_frame(std::span<const double> xi) {
  const int d = static_cast<int>(xi.size());
  if (d < 1) throw ValidationError("orthogonal_frame needs a non-empty vector");
  double norm = 0.0;
  for (double v : xi) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw ValidationError("orthogonal_frame: zero direction");

  OrthogonalFrame f;
  f.dim = d;
  f.direction.resize(d);
  for (int i = 0; i < d; ++i) f.direction[i] = xi[i] / norm;

  const bool plus = f.direction[0] >= 0.0;
  std::vector<double> v(f.direction);
  for (double& c : v) c = plus ? c : -c;
  v[0] += 1.0;  // v = e1 + xi  or  e1 - xi (up to global sign)
  double vv = 0.0;
  for (double c : v) vv += c * c;

  f.matrix.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      f.matrix[r * d + c] = (r == c ? 1.0 : 0.0) - 2.0 * v[r] * v[c] / vv;
    }
  }
  if (plus) {
    for (int c = 0; c < d; ++c) f.matrix[c] = -f.matrix[c];
  }
  // Pin the first row to xi exactly.
  for (int c = 0; c < d; ++c) f.matrix[c] = f.direction[c];
  return f;
}

}  // namespace oped
