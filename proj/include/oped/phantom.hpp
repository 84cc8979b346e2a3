#pragma once

// Synthetic test objects supported in the unit ball: sums of constant-density
// ellipses (d=2) / ellipsoids (d=3) with closed-form Radon projections, and
// explicit polynomials for exactness tests.

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace oped {

/// Pointwise function on R^d.
using PointFunction = std::function<double(std::span<const double>)>;

struct Ellipsoid {
  std::vector<double> center;
  std::vector<double> semi_axes;
  /// Degrees. d=2: one counter-clockwise angle. d=3: Z-Y-Z Euler angles
  /// (alpha, beta, gamma) with R = Rz(alpha) Ry(beta) Rz(gamma).
  std::vector<double> rotation_deg;
  double density = 0.0;

  /// Columns are the rotated principal directions (row-major, d x d).
  std::vector<double> rotation_matrix;

  [[nodiscard]] int dim() const { return static_cast<int>(center.size()); }
  /// Quadratic form Q(x); x lies inside when Q(x) <= 1.
  [[nodiscard]] double quadratic_form(std::span<const double> x) const;
};

Ellipsoid make_ellipsoid(std::vector<double> center, std::vector<double> semi_axes,
                         std::vector<double> rotation_deg, double density);

class Phantom {
 public:
  Phantom() = default;
  Phantom(int dim, std::vector<Ellipsoid> components);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const std::vector<Ellipsoid>& components() const { return components_; }

  /// Sum of densities of the components containing x.
  [[nodiscard]] double eval(std::span<const double> x) const;

  /// Closed-form integral over the hyperplane <xi, x> = t.
  [[nodiscard]] double radon(std::span<const double> xi, double t) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static Phantom from_json(const nlohmann::json& doc);

 private:
  int dim_ = 0;
  std::vector<Ellipsoid> components_;
};

double eval_phantom(const Phantom& p, std::span<const double> x);
double radon_phantom(const Phantom& p, std::span<const double> xi, double t);

/// The conventional 10-ellipse Shepp-Logan head phantom (data/shepp_logan_2d.json).
Phantom shepp_logan_2d();
/// Raw text of the embedded parameter file.
const char* shepp_logan_2d_json();

Phantom unit_disk(double density = 1.0);
Phantom unit_ball_3d(double density = 1.0);
Phantom centered_ball(int dim, double radius, double density = 1.0);

/// Polynomial sum_i c_i x^a_i in d <= 3 variables.
class Polynomial {
 public:
  struct Term {
    double coefficient = 0.0;
    std::array<int, 3> exponents{0, 0, 0};
  };

  Polynomial() = default;
  Polynomial(int dim, std::vector<Term> terms);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] int degree() const;
  [[nodiscard]] const std::vector<Term>& terms() const { return terms_; }
  [[nodiscard]] double eval(std::span<const double> x) const;
  /// Integral over the chord/disk <xi, x> = t of the unit ball (d = 2, 3),
  /// exact up to rounding: Gauss-Legendre along the chord, or Gauss-Legendre
  /// in the radius times a trapezoid rule in the angle over the disk.
  [[nodiscard]] double radon(std::span<const double> xi, double t) const;

  [[nodiscard]] nlohmann::json to_json() const;
  static Polynomial from_json(const nlohmann::json& doc);

  /// Every monomial of total degree <= degree, coefficients uniform in [-1,1].
  static Polynomial random(int dim, int degree, std::mt19937_64& rng);

 private:
  int dim_ = 0;
  std::vector<Term> terms_;
  int max_exponent_ = 0;
};

/// Preset poly_k: 1 + x1 - x2^2 for k = 2; poly_0 = 1, poly_1 = 1 + x1;
/// for k >= 3 add sum_{i=3..k} (-1)^i x1^(i-1) x2 / i. In d = 3 the term
/// x3^k / 2 is added for k >= 1 so the third axis is exercised.
Polynomial poly_preset(int dim, int k);

/// Anything with a pointwise value and a Radon transform.
using Source = std::variant<Phantom, Polynomial>;

int source_dim(const Source& s);
double source_value(const Source& s, std::span<const double> x);
PointFunction source_function(const Source& s);

/// "preset:NAME" (shepp_logan, unit_disk, unit_ball, ball_half, poly_K,
/// poly_K_3d) or a JSON file path holding a phantom or polynomial document.
Source load_source(const std::string& spec);
nlohmann::json source_to_json(const Source& s);
Source source_from_json(const nlohmann::json& doc);

}  // namespace oped
