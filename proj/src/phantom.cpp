#include "oped/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oped/errors.hpp"
#include "oped/geometry.hpp"
#include "oped/specfun.hpp"
#include "phantom_data.hpp"

namespace oped {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::vector<double> rotation_from_angles(int d, const std::vector<double>& deg) {
  if (d == 2) {
    const double a = deg.empty() ? 0.0 : deg[0] * kDeg;
    const double c = std::cos(a), s = std::sin(a);
    return {c, -s, s, c};
  }
  if (d == 3) {
    const double al = (deg.size() > 0 ? deg[0] : 0.0) * kDeg;
    const double be = (deg.size() > 1 ? deg[1] : 0.0) * kDeg;
    const double ga = (deg.size() > 2 ? deg[2] : 0.0) * kDeg;
    auto rz = [](double a) {
      const double c = std::cos(a), s = std::sin(a);
      return std::array<double, 9>{c, -s, 0, s, c, 0, 0, 0, 1};
    };
    auto ry = [](double a) {
      const double c = std::cos(a), s = std::sin(a);
      return std::array<double, 9>{c, 0, s, 0, 1, 0, -s, 0, c};
    };
    auto mul = [](const std::array<double, 9>& a, const std::array<double, 9>& b) {
      std::array<double, 9> r{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) r[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
      return r;
    };
    const auto r = mul(mul(rz(al), ry(be)), rz(ga));
    return {r.begin(), r.end()};
  }
  throw ValidationError("phantoms are supported in d = 2 and d = 3");
}

double uniform_pm1(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace

double Ellipsoid::quadratic_form(std::span<const double> x) const {
  const int d = dim();
  double q = 0.0;
  for (int a = 0; a < d; ++a) {
    // z_a = (R^T (x - c))_a / axis_a
    double z = 0.0;
    for (int i = 0; i < d; ++i) z += rotation_matrix[i * d + a] * (x[i] - center[i]);
    z /= semi_axes[a];
    q += z * z;
  }
  return q;
}

Ellipsoid make_ellipsoid(std::vector<double> center, std::vector<double> semi_axes,
                         std::vector<double> rotation_deg, double density) {
  const int d = static_cast<int>(center.size());
  if (d != 2 && d != 3) throw ValidationError("ellipsoid center must have 2 or 3 coordinates");
  if (static_cast<int>(semi_axes.size()) != d) throw ValidationError("ellipsoid needs one semi-axis per dimension");
  for (double a : semi_axes) {
    if (!(a > 0.0)) throw ValidationError("ellipsoid semi-axes must be positive");
  }
  Ellipsoid e;
  e.rotation_matrix = rotation_from_angles(d, rotation_deg);
  e.center = std::move(center);
  e.semi_axes = std::move(semi_axes);
  e.rotation_deg = std::move(rotation_deg);
  e.density = density;
  return e;
}

Phantom::Phantom(int dim, std::vector<Ellipsoid> components) : dim_(dim), components_(std::move(components)) {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("phantoms are supported in d = 2 and d = 3");
  for (const auto& c : components_) {
    if (c.dim() != dim_) throw ValidationError("phantom component dimension mismatch");
    double cn = 0.0;
    for (double v : c.center) cn += v * v;
    double amax = 0.0;
    for (double a : c.semi_axes) amax = std::max(amax, a);
    if (std::sqrt(cn) + amax > 1.0 + 1e-9) {
      throw ValidationError("phantom component is not contained in the unit ball");
    }
  }
}

double Phantom::eval(std::span<const double> x) const {
  double v = 0.0;
  for (const auto& c : components_) {
    if (c.quadratic_form(x) <= 1.0) v += c.density;
  }
  return v;
}

double Phantom::radon(std::span<const double> xi, double t) const {
  const int d = dim_;
  const double bd1 = ball_volume(d - 1);
  double total = 0.0;
  for (const auto& c : components_) {
    // x = c + R diag(a) z maps the unit ball onto the component; the plane
    // <xi, x> = t becomes <v, z> = t - <xi, c> with v = diag(a) R^T xi.
    double vv = 0.0;
    double det = 1.0;
    for (int a = 0; a < d; ++a) {
      double va = 0.0;
      for (int i = 0; i < d; ++i) va += c.rotation_matrix[i * d + a] * xi[i];
      va *= c.semi_axes[a];
      vv += va * va;
      det *= c.semi_axes[a];
    }
    double offset = 0.0;
    for (int i = 0; i < d; ++i) offset += xi[i] * c.center[i];
    const double vn = std::sqrt(vv);
    const double s = (t - offset) / vn;
    const double r2 = 1.0 - s * s;
    if (r2 <= 0.0) continue;
    const double slice = d == 2 ? std::sqrt(r2) : r2;
    total += c.density * det / vn * bd1 * slice;
  }
  return total;
}

nlohmann::json Phantom::to_json() const {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components_) {
    nlohmann::json j{{"center", c.center}, {"axes", c.semi_axes}, {"density", c.density}};
    if (dim_ == 2) {
      j["rotation"] = c.rotation_deg.empty() ? 0.0 : c.rotation_deg[0];
    } else {
      j["rotation"] = c.rotation_deg;
    }
    comps.push_back(std::move(j));
  }
  return {{"d", dim_}, {"components", comps}};
}

Phantom Phantom::from_json(const nlohmann::json& doc) {
  try {
    const int d = doc.at("d").get<int>();
    std::vector<Ellipsoid> comps;
    for (const auto& c : doc.at("components")) {
      std::vector<double> rot;
      if (c.contains("rotation")) {
        const auto& r = c.at("rotation");
        if (r.is_number()) {
          rot = {r.get<double>()};
        } else {
          rot = r.get<std::vector<double>>();
        }
      }
      comps.push_back(make_ellipsoid(c.at("center").get<std::vector<double>>(),
                                     c.at("axes").get<std::vector<double>>(), rot,
                                     c.at("density").get<double>()));
    }
    return Phantom(d, std::move(comps));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed phantom document: ") + e.what());
  }
}

double eval_phantom(const Phantom& p, std::span<const double> x) { return p.eval(x); }
double radon_phantom(const Phantom& p, std::span<const double> xi, double t) { return p.radon(xi, t); }

const char* shepp_logan_2d_json() { return detail::kSheppLoganJson; }

Phantom shepp_logan_2d() {
  return Phantom::from_json(nlohmann::json::parse(detail::kSheppLoganJson));
}

Phantom unit_disk(double density) {
  return Phantom(2, {make_ellipsoid({0.0, 0.0}, {1.0, 1.0}, {0.0}, density)});
}

Phantom unit_ball_3d(double density) {
  return Phantom(3, {make_ellipsoid({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0}, density)});
}

Phantom centered_ball(int dim, double radius, double density) {
  std::vector<double> c(dim, 0.0), a(dim, radius), r(dim == 2 ? 1 : 3, 0.0);
  return Phantom(dim, {make_ellipsoid(c, a, r, density)});
}

// Polynomial

Polynomial::Polynomial(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1 || dim_ > 3) throw ValidationError("polynomials are supported in 1 to 3 variables");
  for (const auto& t : terms_) {
    for (int a = 0; a < 3; ++a) {
      if (t.exponents[a] < 0) throw ValidationError("negative polynomial exponent");
      if (a >= dim_ && t.exponents[a] != 0) throw ValidationError("polynomial exponent beyond its dimension");
      max_exponent_ = std::max(max_exponent_, t.exponents[a]);
    }
  }
}

int Polynomial::degree() const {
  int deg = 0;
  for (const auto& t : terms_) deg = std::max(deg, t.exponents[0] + t.exponents[1] + t.exponents[2]);
  return deg;
}

double Polynomial::eval(std::span<const double> x) const {
  constexpr int kTable = 64;
  double powers[3][kTable];
  const int top = max_exponent_;
  const bool tabulated = top < kTable;
  if (tabulated) {
    for (int a = 0; a < dim_; ++a) {
      powers[a][0] = 1.0;
      for (int p = 1; p <= top; ++p) powers[a][p] = powers[a][p - 1] * x[a];
    }
  }
  double s = 0.0;
  for (const auto& t : terms_) {
    double m = t.coefficient;
    for (int a = 0; a < dim_; ++a) {
      if (tabulated) {
        m *= powers[a][t.exponents[a]];
      } else {
        for (int p = 0; p < t.exponents[a]; ++p) m *= x[a];
      }
    }
    s += m;
  }
  return s;
}

double Polynomial::radon(std::span<const double> xi, double t) const {
  if (dim_ != 2 && dim_ != 3) throw ValidationError("polynomial Radon transforms need d = 2 or 3");
  if (static_cast<int>(xi.size()) != dim_) throw ValidationError("direction dimension differs from the polynomial");
  if (std::abs(t) >= 1.0) return 0.0;
  const int deg = degree();
  const double rho = std::sqrt(1.0 - t * t);
  const OrthogonalFrame q = orthogonal_frame(xi);
  double x[3];
  auto at = [&](double y1, double y2) {
    for (int c = 0; c < dim_; ++c) x[c] = t * q(0, c) + y1 * q(1, c) + (dim_ == 3 ? y2 * q(2, c) : 0.0);
    return eval(std::span<const double>(x, dim_));
  };
  if (dim_ == 2) {
    const QuadratureRule gl = gauss_legendre_rule(deg / 2 + 1);
    double s = 0.0;
    for (std::size_t k = 0; k < gl.size(); ++k) s += gl.weights[k] * at(rho * gl.nodes[k], 0.0);
    return 2.0 * rho * s;
  }
  // r dr carries one extra degree; the angle needs deg + 1 equispaced points
  const QuadratureRule gl = gauss_legendre_rule((deg + 1) / 2 + 1);
  const int angles = deg + 1;
  double s = 0.0;
  for (std::size_t k = 0; k < gl.size(); ++k) {
    const double r = 0.5 * (gl.nodes[k] + 1.0);
    double ring = 0.0;
    for (int a = 0; a < angles; ++a) {
      const double phi = 2.0 * std::numbers::pi * a / angles;
      ring += at(rho * r * std::cos(phi), rho * r * std::sin(phi));
    }
    s += gl.weights[k] * r * ring / angles;
  }
  // int_0^1 r dr = sum w_k r_k (weights normalized on [0,1]); disk area factor 2 pi rho^2
  return 2.0 * std::numbers::pi * rho * rho * s;
}

nlohmann::json Polynomial::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    terms.push_back({{"c", t.coefficient},
                     {"e", std::vector<int>(t.exponents.begin(), t.exponents.begin() + dim_)}});
  }
  return {{"d", dim_}, {"polynomial", terms}};
}

Polynomial Polynomial::from_json(const nlohmann::json& doc) {
  try {
    const int d = doc.at("d").get<int>();
    std::vector<Term> terms;
    for (const auto& j : doc.at("polynomial")) {
      Term t;
      t.coefficient = j.at("c").get<double>();
      const auto e = j.at("e").get<std::vector<int>>();
      if (static_cast<int>(e.size()) != d) throw ValidationError("polynomial term has wrong exponent count");
      for (int a = 0; a < d; ++a) t.exponents[a] = e[a];
      terms.push_back(t);
    }
    return Polynomial(d, std::move(terms));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed polynomial document: ") + e.what());
  }
}

Polynomial Polynomial::random(int dim, int degree, std::mt19937_64& rng) {
  std::vector<Term> terms;
  for (int total = 0; total <= degree; ++total) {
    if (dim == 1) {
      terms.push_back({uniform_pm1(rng), {total, 0, 0}});
    } else if (dim == 2) {
      for (int a = total; a >= 0; --a) terms.push_back({uniform_pm1(rng), {a, total - a, 0}});
    } else {
      for (int a = total; a >= 0; --a)
        for (int b = total - a; b >= 0; --b) terms.push_back({uniform_pm1(rng), {a, b, total - a - b}});
    }
  }
  return Polynomial(dim, std::move(terms));
}

Polynomial poly_preset(int dim, int k) {
  if (dim != 2 && dim != 3) throw ValidationError("poly presets exist for d = 2 and d = 3");
  if (k < 0) throw ValidationError("poly preset degree must be non-negative");
  std::vector<Polynomial::Term> terms{{1.0, {0, 0, 0}}};
  if (k >= 1) terms.push_back({1.0, {1, 0, 0}});
  if (k >= 2) terms.push_back({-1.0, {0, 2, 0}});
  for (int i = 3; i <= k; ++i) terms.push_back({(i % 2 == 0 ? 1.0 : -1.0) / i, {i - 1, 1, 0}});
  if (dim == 3 && k >= 1) terms.push_back({0.5, {0, 0, k}});
  return Polynomial(dim, std::move(terms));
}

// Source

int source_dim(const Source& s) {
  return std::visit([](const auto& v) { return v.dim(); }, s);
}

double source_value(const Source& s, std::span<const double> x) {
  return std::visit([&](const auto& v) { return v.eval(x); }, s);
}

PointFunction source_function(const Source& s) {
  return std::visit([](const auto& v) -> PointFunction {
    return [v](std::span<const double> x) { return v.eval(x); };
  }, s);
}

nlohmann::json source_to_json(const Source& s) {
  return std::visit([](const auto& v) { return v.to_json(); }, s);
}

Source source_from_json(const nlohmann::json& doc) {
  if (doc.contains("components")) return Phantom::from_json(doc);
  if (doc.contains("polynomial")) return Polynomial::from_json(doc);
  throw ValidationError("document is neither a phantom nor a polynomial");
}

Source load_source(const std::string& spec) {
  const std::string prefix = "preset:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string name = spec.substr(prefix.size());
    if (name == "shepp_logan") return shepp_logan_2d();
    if (name == "unit_disk") return unit_disk();
    if (name == "unit_ball") return unit_ball_3d();
    if (name == "ball_half") return centered_ball(3, 0.5);
    if (name == "disk_half") return centered_ball(2, 0.5);
    if (name.rfind("poly_", 0) == 0) {
      std::string rest = name.substr(5);
      int dim = 2;
      const std::string suffix = "_3d";
      if (rest.size() > suffix.size() && rest.compare(rest.size() - suffix.size(), suffix.size(), suffix) == 0) {
        dim = 3;
        rest.resize(rest.size() - suffix.size());
      }
      try {
        std::size_t used = 0;
        const int k = std::stoi(rest, &used);
        if (used == rest.size()) return poly_preset(dim, k);
      } catch (const std::exception&) {
      }
    }
    throw ValidationError("unknown preset '" + name + "'");
  }
  return source_from_json(read_json_file(spec));
}

}  // namespace oped
