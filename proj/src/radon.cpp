#include "oped/radon.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oped/errors.hpp"
#include "oped/parallel.hpp"

namespace oped {

namespace {

constexpr double kPi = std::numbers::pi;

const QuadratureRule& panel_rule() {
  static const QuadratureRule rule = gauss_legendre_rule(8);
  return rule;
}

[[noreturn]] void non_finite(std::span<const double> x, double value) {
  std::ostringstream os;
  os << "non-finite integrand value " << value << " at (";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  throw NumericalError(os.str());
}

}  // namespace

std::string to_string(ScanType t) {
  switch (t) {
    case ScanType::TypeI: return "I";
    case ScanType::TypeII: return "II";
    case ScanType::GegenbauerGauss: return "gegenbauer-gauss";
    case ScanType::Custom: return "custom";
  }
  return "custom";
}

ScanType parse_scan_type(const std::string& s) {
  if (s == "I" || s == "type-I" || s == "typeI") return ScanType::TypeI;
  if (s == "II" || s == "type-II" || s == "typeII") return ScanType::TypeII;
  if (s == "gegenbauer-gauss" || s == "gauss" || s == "3d") return ScanType::GegenbauerGauss;
  if (s == "custom") return ScanType::Custom;
  throw ValidationError("unknown scan type '" + s + "'");
}

int ScanGeometry::operator_degree() const {
  return (type == ScanType::TypeI || type == ScanType::TypeII) ? 2 * order : order;
}

ScanGeometry make_geometry(int dim, ScanType type, int order) {
  if (dim != 2 && dim != 3) throw ValidationError("scanning geometries exist for d = 2 and d = 3");
  if (order < 0) throw ValidationError("geometry order must be non-negative");
  ScanGeometry g;
  g.dim = dim;
  g.type = type;
  g.order = order;
  switch (type) {
    case ScanType::TypeI:
    case ScanType::TypeII:
      if (dim != 2) throw ValidationError("type I/II geometries are two-dimensional");
      if (order < 1) throw ValidationError("type I/II geometries need m >= 1");
      g.directions = circle_directions(order);
      g.nodes = type == ScanType::TypeII ? gauss_gegenbauer_rule(0.5, 2 * order) : folded_chebyshev_rule(2 * order + 1);
      break;
    case ScanType::GegenbauerGauss:
      g.directions = dim == 2 ? half_circle_directions(order) : sphere_product_cubature(order);
      g.nodes = gauss_gegenbauer_rule(0.5 * (dim - 1), order + 1);
      break;
    case ScanType::Custom:
      throw ValidationError("custom geometries are built from explicit directions and nodes");
  }
  return g;
}

void radon_numeric_multi(const MultiPointFunction& f, std::size_t count, std::span<const double> xi, double t,
                         int refinement, double* out) {
  const int d = static_cast<int>(xi.size());
  if (d != 2 && d != 3) throw ValidationError("radon_numeric supports d = 2 and d = 3");
  if (refinement < 1) throw ValidationError("radon_numeric refinement must be positive");
  std::fill_n(out, count, 0.0);
  if (std::abs(t) >= 1.0) return;
  const OrthogonalFrame q = orthogonal_frame(xi);
  const QuadratureRule& gl = panel_rule();
  const double rho = std::sqrt(1.0 - t * t);

  double x[3];
  std::vector<double> values(count);
  // Adds weight * f((t, rho y) Q) to out.
  auto accumulate = [&](double y1, double y2, double weight) {
    for (int c = 0; c < d; ++c) {
      x[c] = t * q(0, c) + rho * y1 * q(1, c) + (d == 3 ? rho * y2 * q(2, c) : 0.0);
    }
    const std::span<const double> xs(x, d);
    f(xs, values.data());
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(values[i])) non_finite(xs, values[i]);
      out[i] += weight * values[i];
    }
  };

  if (d == 2) {
    const double h = 2.0 / refinement;
    for (int p = 0; p < refinement; ++p) {
      const double a = -1.0 + p * h;
      // weights are normalized to sum 1 on [-1,1], so a panel of width h scales by h
      for (std::size_t k = 0; k < gl.size(); ++k) accumulate(a + 0.5 * h * (gl.nodes[k] + 1.0), 0.0, gl.weights[k] * h * rho);
    }
    return;
  }

  const int azimuths = 8 * refinement;
  const double h = 1.0 / refinement;
  for (int p = 0; p < refinement; ++p) {
    for (std::size_t k = 0; k < gl.size(); ++k) {
      const double r = p * h + 0.5 * h * (gl.nodes[k] + 1.0);
      const double w = gl.weights[k] * h * r * (2.0 * kPi / azimuths) * rho * rho;
      for (int a = 0; a < azimuths; ++a) {
        const double phi = 2.0 * kPi * a / azimuths;
        accumulate(r * std::cos(phi), r * std::sin(phi), w);
      }
    }
  }
}

double radon_numeric(const PointFunction& f, std::span<const double> xi, double t, int refinement) {
  double out = 0.0;
  radon_numeric_multi([&](std::span<const double> x, double* v) { v[0] = f(x); }, 1, xi, t, refinement, &out);
  return out;
}

namespace {

template <class ValueAt>
Sinogram fill(const ScanGeometry& geometry, const SamplingOptions& options, ValueAt&& value_at) {
  Sinogram s;
  s.geometry = geometry;
  const std::size_t views = geometry.views();
  const std::size_t offsets = geometry.offsets();
  s.values.assign(views * offsets, 0.0);
  parallel_for(views * offsets, options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t e = begin; e < end; ++e) {
      const std::size_t nu = e / offsets;
      const std::size_t j = e % offsets;
      s.values[e] = value_at(geometry.directions.point(nu), geometry.nodes.nodes[j]);
    }
  });
  if (options.noise_sigma > 0.0) add_gaussian_noise(s, options.noise_sigma, options.seed);
  return s;
}

}  // namespace

Sinogram sample_sinogram(const Source& source, const ScanGeometry& geometry, const SamplingOptions& options) {
  if (source_dim(source) != geometry.dim) throw ValidationError("source and geometry dimensions differ");
  if (const auto* ph = std::get_if<Phantom>(&source); ph && options.analytic) {
    return fill(geometry, options, [&](std::span<const double> xi, double t) { return ph->radon(xi, t); });
  }
  if (const auto* poly = std::get_if<Polynomial>(&source); poly && options.analytic) {
    return fill(geometry, options, [&](std::span<const double> xi, double t) { return poly->radon(xi, t); });
  }
  const PointFunction f = source_function(source);
  return fill(geometry, options,
              [&](std::span<const double> xi, double t) { return radon_numeric(f, xi, t, options.refinement); });
}

Sinogram sample_sinogram(const PointFunction& f, const ScanGeometry& geometry, const SamplingOptions& options) {
  return fill(geometry, options,
              [&](std::span<const double> xi, double t) { return radon_numeric(f, xi, t, options.refinement); });
}

void add_gaussian_noise(Sinogram& s, double sigma, std::uint64_t seed) {
  if (sigma < 0.0) throw ValidationError("noise sigma must be non-negative");
  if (sigma == 0.0) return;
  std::mt19937_64 rng(seed);
  auto u01 = [&] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  for (std::size_t i = 0; i < s.values.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(u01()));
    const double a = 2.0 * kPi * u01();
    s.values[i] += sigma * r * std::cos(a);
    if (i + 1 < s.values.size()) s.values[i + 1] += sigma * r * std::sin(a);
  }
}

}  // namespace oped
