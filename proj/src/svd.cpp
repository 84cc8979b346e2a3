#include "oped/svd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oped/errors.hpp"
#include "oped/parallel.hpp"

namespace oped {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dim(int d) {
  if (d != 2 && d != 3) throw ValidationError("the SVD bases are provided for d = 2 and d = 3");
}

double binom(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

/// Offset of degree l inside solid_harmonics_upto output.
int harmonic_offset(int d, int l) { return d == 2 ? (l == 0 ? 0 : 2 * l - 1) : l * l; }

double uniform_pm1(std::mt19937_64& rng) { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; }

std::vector<double> random_ball_point(int d, std::mt19937_64& rng) {
  std::vector<double> x(d);
  for (;;) {
    double r2 = 0.0;
    for (auto& v : x) {
      v = uniform_pm1(rng);
      r2 += v * v;
    }
    if (r2 <= 1.0) return x;
  }
}

/// Deterministic, roughly even direction lattice.
std::vector<double> lattice_direction(int d, int i, int count) {
  if (d == 2) {
    const double phi = 2.0 * kPi * i / count;
    return {std::cos(phi), std::sin(phi)};
  }
  const double z = 1.0 - (2.0 * i + 1.0) / count;
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = i * kPi * (3.0 - std::sqrt(5.0));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

}  // namespace

int harmonic_dim(int d, int m) {
  if (d < 2 || m < 0) throw ValidationError("harmonic_dim needs d >= 2 and m >= 0");
  return static_cast<int>(binom(m + d - 1, m) - binom(m + d - 3, m - 2));
}

int ball_space_dim(int d, int n) {
  if (d < 1 || n < 0) throw ValidationError("ball_space_dim needs d >= 1 and n >= 0");
  return static_cast<int>(binom(n + d - 1, n));
}

void validate_index(int d, const BasisIndex& idx) {
  check_dim(d);
  if (idx.n < 0 || idx.k < 0 || 2 * idx.k > idx.n) throw ValidationError("basis index needs 0 <= 2k <= n");
  if (idx.j < 1 || idx.j > harmonic_dim(d, idx.n - 2 * idx.k)) {
    throw ValidationError("basis index j out of range 1..dim H_(n-2k)");
  }
}

std::vector<BasisIndex> basis_indices(int d, int n) {
  check_dim(d);
  std::vector<BasisIndex> out;
  for (int k = 0; 2 * k <= n; ++k) {
    const int h = harmonic_dim(d, n - 2 * k);
    for (int j = 1; j <= h; ++j) out.push_back({n, k, j});
  }
  return out;
}

std::vector<BasisIndex> basis_indices_upto(int d, int N) {
  std::vector<BasisIndex> out;
  for (int n = 0; n <= N; ++n) {
    const auto level = basis_indices(d, n);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::vector<double> solid_harmonics_upto(int d, int M, std::span<const double> x) {
  check_dim(d);
  if (static_cast<int>(x.size()) != d) throw ValidationError("point dimension differs from d");
  std::vector<double> out(harmonic_offset(d, M + 1));
  // Re/Im of (x1 + i x2)^m.
  std::vector<double> re(M + 1), im(M + 1);
  re[0] = 1.0;
  im[0] = 0.0;
  for (int m = 1; m <= M; ++m) {
    re[m] = re[m - 1] * x[0] - im[m - 1] * x[1];
    im[m] = re[m - 1] * x[1] + im[m - 1] * x[0];
  }
  if (d == 2) {
    out[0] = 1.0;
    for (int m = 1; m <= M; ++m) {
      out[2 * m - 1] = std::numbers::sqrt2 * re[m];
      out[2 * m] = std::numbers::sqrt2 * im[m];
    }
    return out;
  }
  // Pi_l^m(z, r^2) = r^(l-m) P_l^m(z/r) / (1-(z/r)^2)^(m/2) without the Condon-Shortley phase.
  const double z = x[2];
  const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  std::vector<double> pi((M + 1) * (M + 1), 0.0);
  auto P = [&](int l, int m) -> double& { return pi[l * (M + 1) + m]; };
  double dfact = 1.0;  // (2m-1)!!
  for (int m = 0; m <= M; ++m) {
    if (m > 0) dfact *= 2.0 * m - 1.0;
    P(m, m) = dfact;
    if (m + 1 <= M) P(m + 1, m) = (2.0 * m + 1.0) * z * dfact;
    for (int l = m + 2; l <= M; ++l) {
      P(l, m) = ((2.0 * l - 1.0) * z * P(l - 1, m) - (l + m - 1.0) * r2 * P(l - 2, m)) / (l - m);
    }
  }
  for (int l = 0; l <= M; ++l) {
    const int base = l * l;
    for (int m = 0; m <= l; ++m) {
      const double norm = std::sqrt((2.0 * l + 1.0) * (m == 0 ? 1.0 : 2.0) *
                                    std::exp(std::lgamma(l - m + 1.0) - std::lgamma(l + m + 1.0)));
      if (m == 0) {
        out[base] = norm * P(l, 0);
      } else {
        out[base + 2 * m - 1] = norm * P(l, m) * re[m];
        out[base + 2 * m] = norm * P(l, m) * im[m];
      }
    }
  }
  return out;
}

double spherical_harmonic(int d, int m, int j, std::span<const double> xi) {
  check_dim(d);
  if (m < 0 || j < 1 || j > harmonic_dim(d, m)) throw ValidationError("spherical harmonic index out of range");
  return solid_harmonics_upto(d, m, xi)[harmonic_offset(d, m) + j - 1];
}

std::vector<double> ball_basis_upto(int d, int N, std::span<const double> x) {
  const auto Y = solid_harmonics_upto(d, N, x);
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const double s = 2.0 * r2 - 1.0;
  const double lambda = 0.5 * d;
  std::vector<double> out;
  out.reserve(Y.size() * (N + 2) / 2 + 1);
  for (int n = 0; n <= N; ++n) {
    for (int k = 0; 2 * k <= n; ++k) {
      const int l = n - 2 * k;
      const double radial = std::sqrt((l + lambda) / lambda) * jacobi_orthonormal(0.0, l + lambda - 1.0, k, s);
      const int h = harmonic_dim(d, l);
      for (int j = 0; j < h; ++j) out.push_back(radial * Y[harmonic_offset(d, l) + j]);
    }
  }
  return out;
}

double ball_basis(int d, const BasisIndex& idx, std::span<const double> x) {
  validate_index(d, idx);
  const int l = idx.n - 2 * idx.k;
  const double lambda = 0.5 * d;
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  const auto Y = solid_harmonics_upto(d, l, x);
  return std::sqrt((l + lambda) / lambda) * jacobi_orthonormal(0.0, l + lambda - 1.0, idx.k, 2.0 * r2 - 1.0) *
         Y[harmonic_offset(d, l) + idx.j - 1];
}

double cylinder_basis(int d, const BasisIndex& idx, std::span<const double> xi, double t) {
  validate_index(d, idx);
  const double lambda = 0.5 * d;
  const double w = std::pow(std::max(0.0, 1.0 - t * t), 0.5 * (d - 1));
  return w * gegenbauer(lambda, idx.n, t) / std::sqrt(gegenbauer_norm(lambda, idx.n)) *
         spherical_harmonic(d, idx.n - 2 * idx.k, idx.j, xi);
}

double singular_value(int d, int n) {
  if (d < 2 || n < 0) throw ValidationError("singular_value needs d >= 2 and n >= 0");
  // n! / (d)_n = Gamma(n+1) Gamma(d) / Gamma(n+d)
  return ball_volume(d - 1) * std::exp(0.5 * (std::lgamma(n + 1.0) + std::lgamma(d) - std::lgamma(n + d)));
}

double radon_of_orthogonal_polynomial(int d, int n, const PointFunction& P, std::span<const double> xi, double t) {
  if (std::abs(t) > 1.0) return 0.0;
  const double lambda = 0.5 * d;
  return ball_volume(d - 1) * std::pow(1.0 - t * t, 0.5 * (d - 1)) * gegenbauer(lambda, n, t) /
         gegenbauer_at_one(lambda, n) * P(xi);
}

BallQuadrature ball_quadrature(int d, int degree) {
  check_dim(d);
  if (degree < 0) throw ValidationError("quadrature degree must be non-negative");
  const QuadratureRule radial = gauss_legendre_rule((degree + d) / 2 + 1);
  const SphericalCubature sphere = full_sphere_cubature(d, degree);
  BallQuadrature q;
  q.dim = d;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double r = 0.5 * (radial.nodes[i] + 1.0);
    // b_d^-1 int_B f = d int_0^1 r^(d-1) (sigma_d^-1 int_S f(r xi)) dr
    const double wr = d * radial.weights[i] * std::pow(r, d - 1);
    for (std::size_t nu = 0; nu < sphere.size(); ++nu) {
      const auto xi = sphere.point(nu);
      for (int c = 0; c < d; ++c) q.points.push_back(r * xi[c]);
      q.weights.push_back(wr * sphere.weights[nu]);
    }
  }
  return q;
}

int max_truncation(const ScanGeometry& g) {
  return std::max(0, std::min(g.directions.degree, g.nodes.exact_degree) / 2);
}

SvdCoefficients sinogram_coefficients(const Sinogram& s, int N) {
  const ScanGeometry& g = s.geometry;
  const int d = g.dim;
  check_dim(d);
  if (N < 0) throw ValidationError("truncation degree must be non-negative");
  if (g.directions.degree < 2 * N) {
    throw ValidationError("direction cubature degree " + std::to_string(g.directions.degree) +
                          " is below 2N = " + std::to_string(2 * N) + "; resample on a finer geometry");
  }
  if (g.nodes.exact_degree < 2 * N) {
    throw ValidationError("offset rule exactness " + std::to_string(g.nodes.exact_degree) + " is below 2N = " +
                          std::to_string(2 * N) + "; resample on a finer geometry");
  }
  if (std::abs(g.nodes.weight_exponent - 0.5 * (d - 1)) > 1e-12) {
    throw ValidationError("offset rule is not for the weight (1 - t^2)^((d-1)/2)");
  }
  if (s.values.size() != g.views() * g.offsets()) throw ValidationError("sinogram value count does not match its geometry");
  const double lambda = 0.5 * d;

  SvdCoefficients c;
  c.dim = d;
  c.truncation = N;
  c.indices = basis_indices_upto(d, N);
  c.values.assign(c.indices.size(), 0.0);

  // G[j][m] = w_j (1 - t_j^2)^(-(d-1)/2) C_m(t_j) / sqrt(h_m)
  std::vector<double> G(g.offsets() * (N + 1));
  for (std::size_t j = 0; j < g.offsets(); ++j) {
    const double t = g.nodes.nodes[j];
    const auto cm = gegenbauer_all(lambda, N, t);
    const double w = g.nodes.weights[j] / std::pow(1.0 - t * t, 0.5 * (d - 1));
    for (int m = 0; m <= N; ++m) G[j * (N + 1) + m] = w * cm[m] / std::sqrt(gegenbauer_norm(lambda, m));
  }
  std::vector<double> profile(N + 1);
  for (std::size_t nu = 0; nu < g.views(); ++nu) {
    std::fill(profile.begin(), profile.end(), 0.0);
    for (std::size_t j = 0; j < g.offsets(); ++j) {
      for (int m = 0; m <= N; ++m) profile[m] += s.at(nu, j) * G[j * (N + 1) + m];
    }
    const auto Y = solid_harmonics_upto(d, N, g.directions.point(nu));
    const double lam = g.directions.weights[nu];
    for (std::size_t i = 0; i < c.indices.size(); ++i) {
      const auto& idx = c.indices[i];
      const int l = idx.n - 2 * idx.k;
      c.values[i] += lam * profile[idx.n] * Y[harmonic_offset(d, l) + idx.j - 1];
    }
  }
  return c;
}

std::vector<double> truncated_svd_points(const SvdCoefficients& c, const std::vector<std::vector<double>>& coords,
                                         int threads) {
  const int d = c.dim;
  if (static_cast<int>(coords.size()) != d) throw ValidationError("point dimension differs from the coefficients");
  std::vector<double> scaled(c.values.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = c.values[i] / singular_value(d, c.indices[i].n);
  const std::size_t count = coords[0].size();
  std::vector<double> out(count);
  parallel_for(count, threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> x(d);
    for (std::size_t p = begin; p < end; ++p) {
      for (int a = 0; a < d; ++a) x[a] = coords[a][p];
      const auto f = ball_basis_upto(d, c.truncation, x);
      double s = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) s += scaled[i] * f[i];
      out[p] = s;
    }
  });
  return out;
}

ImageGrid truncated_svd_reconstruct(const Sinogram& s, int N, int resolution, int threads) {
  if (resolution < 2) throw ValidationError("grid resolution must be at least 2");
  const SvdCoefficients c = sinogram_coefficients(s, N);
  ImageGrid grid = ImageGrid::make(s.geometry.dim, resolution);
  const auto pts = grid.masked_points();
  const auto values = truncated_svd_points(c, pts.coords, threads);
  for (std::size_t p = 0; p < pts.index.size(); ++p) grid.values[pts.index[p]] = values[p];
  return grid;
}

SvdCoefficients svd_forward(int d, const PointFunction& f, int N, int quad_degree) {
  check_dim(d);
  if (N < 0) throw ValidationError("truncation degree must be non-negative");
  const BallQuadrature q = ball_quadrature(d, quad_degree > 0 ? quad_degree : 2 * N + 8);
  SvdCoefficients c;
  c.dim = d;
  c.truncation = N;
  c.indices = basis_indices_upto(d, N);
  c.values.assign(c.indices.size(), 0.0);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const auto x = q.point(p);
    const double fx = q.weights[p] * f(x);
    const auto basis = ball_basis_upto(d, N, x);
    for (std::size_t i = 0; i < basis.size(); ++i) c.values[i] += fx * basis[i];
  }
  for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] *= singular_value(d, c.indices[i].n);
  return c;
}

double radon_from_coefficients(const SvdCoefficients& c, std::span<const double> xi, double t) {
  const int d = c.dim;
  const double lambda = 0.5 * d;
  const auto Y = solid_harmonics_upto(d, c.truncation, xi);
  const auto cn = gegenbauer_all(lambda, c.truncation, t);
  const double w = std::pow(std::max(0.0, 1.0 - t * t), 0.5 * (d - 1));
  double s = 0.0;
  for (std::size_t i = 0; i < c.indices.size(); ++i) {
    const auto& idx = c.indices[i];
    const int l = idx.n - 2 * idx.k;
    s += c.values[i] * cn[idx.n] / std::sqrt(gegenbauer_norm(lambda, idx.n)) * Y[harmonic_offset(d, l) + idx.j - 1];
  }
  return w * s;
}

double radon_compact(int d, const PointFunction& f, int N, std::span<const double> xi, double t, int quad_degree) {
  check_dim(d);
  const double lambda = 0.5 * d;
  const BallQuadrature q = ball_quadrature(d, quad_degree > 0 ? quad_degree : 2 * N + 8);
  // int_B f C_n(<x,xi>) dx = b_d * normalized quadrature sum
  std::vector<double> moments(N + 1, 0.0);
  for (std::size_t p = 0; p < q.size(); ++p) {
    const auto x = q.point(p);
    double u = 0.0;
    for (int c = 0; c < d; ++c) u += x[c] * xi[c];
    const double fx = q.weights[p] * f(x);
    const auto cn = gegenbauer_all(lambda, N, u);
    for (int n = 0; n <= N; ++n) moments[n] += fx * cn[n];
  }
  const auto ct = gegenbauer_all(lambda, N, t);
  double s = 0.0;
  for (int n = 0; n <= N; ++n) s += ball_volume(d) * moments[n] / gegenbauer_norm(lambda, n) * ct[n];
  return BallConstants::gegenbauer_normalizer(lambda) * std::pow(std::max(0.0, 1.0 - t * t), 0.5 * (d - 1)) * s;
}

double adjoint_compact(int d, const CylinderFunction& q, int N, std::span<const double> x, int quad_degree) {
  check_dim(d);
  const double lambda = 0.5 * d;
  const SphericalCubature sphere = full_sphere_cubature(d, quad_degree);
  const QuadratureRule rule = gauss_gegenbauer_rule(0.5 * (d - 1), quad_degree / 2 + 1);
  // With g = w^(d-1) q the t-integral carries the Gegenbauer weight, and
  // c_(d/2) int (1-t^2)^((d-1)/2) F dt = sum_i w_i F(t_i).
  double total = 0.0;
  for (std::size_t nu = 0; nu < sphere.size(); ++nu) {
    const auto xi = sphere.point(nu);
    double u = 0.0;
    for (int c = 0; c < d; ++c) u += x[c] * xi[c];
    const auto cu = gegenbauer_all(lambda, N, u);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto ct = gegenbauer_all(lambda, N, rule.nodes[i]);
      double k = 0.0;
      for (int n = 0; n <= N; ++n) k += ct[n] * cu[n] / gegenbauer_norm(lambda, n);
      total += sphere.weights[nu] * rule.weights[i] * q(xi, rule.nodes[i]) * k;
    }
  }
  return ball_volume(d - 1) * total;
}

double cylinder_inner(int d, const CylinderFunction& p, const CylinderFunction& q, int quad_degree) {
  check_dim(d);
  const SphericalCubature sphere = full_sphere_cubature(d, quad_degree);
  const QuadratureRule rule = gauss_gegenbauer_rule(0.5 * (d - 1), quad_degree / 2 + 1);
  double total = 0.0;
  for (std::size_t nu = 0; nu < sphere.size(); ++nu) {
    const auto xi = sphere.point(nu);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      total += sphere.weights[nu] * rule.weights[i] * p(xi, rule.nodes[i]) * q(xi, rule.nodes[i]);
    }
  }
  return total;
}

double ball_inner(int d, const PointFunction& f, const PointFunction& g, int quad_degree) {
  const BallQuadrature q = ball_quadrature(d, quad_degree);
  double total = 0.0;
  for (std::size_t p = 0; p < q.size(); ++p) total += q.weights[p] * f(q.point(p)) * g(q.point(p));
  return total;
}

std::vector<double> radon_numeric_basis(int d, int N, std::span<const double> xi, double t, int refinement) {
  const std::size_t count = basis_indices_upto(d, N).size();
  std::vector<double> out(count);
  radon_numeric_multi(
      [&](std::span<const double> x, double* v) {
        const auto b = ball_basis_upto(d, N, x);
        std::copy(b.begin(), b.end(), v);
      },
      count, xi, t, refinement, out.data());
  return out;
}

nlohmann::json SvdVerifyReport::to_json() const {
  nlohmann::json table = nlohmann::json::array();
  for (std::size_t n = 0; n < gamma.size(); ++n) {
    table.push_back({{"n", n}, {"gamma", gamma[n]}, {"measured", measured_gamma[n]}});
  }
  return {
      {"d", dim},
      {"n_max", n_max},
      {"max_pair_residual", max_pair_residual},
      {"gram_residuals", {{"ball", ball_gram_residual}, {"cylinder", cylinder_gram_residual}}},
      {"kernel_residual", kernel_residual},
      {"gamma_table", table},
  };
}

SvdVerifyReport svd_verify(int d, int n_max, int lattice, std::uint64_t seed) {
  check_dim(d);
  if (n_max < 0 || lattice < 1) throw ValidationError("svd_verify needs n_max >= 0 and lattice >= 1");
  SvdVerifyReport r;
  r.dim = d;
  r.n_max = n_max;
  const auto indices = basis_indices_upto(d, n_max);
  const std::size_t count = indices.size();
  const double lambda = 0.5 * d;
  // Panels are exact for polynomial integrands of these degrees; see radon_numeric.
  const int refinement = std::max(2, n_max / 4 + 1);

  // Pair identity R f = gamma g on the lattice.
  for (int a = 0; a < lattice; ++a) {
    const auto xi = lattice_direction(d, a, lattice);
    for (int b = 0; b < lattice; ++b) {
      const double t = -1.0 + (2.0 * b + 1.0) / lattice;
      const auto rf = radon_numeric_basis(d, n_max, xi, t, refinement);
      for (std::size_t i = 0; i < count; ++i) {
        const double expected = singular_value(d, indices[i].n) * cylinder_basis(d, indices[i], xi, t);
        r.max_pair_residual = std::max(r.max_pair_residual, std::abs(rf[i] - expected));
      }
    }
  }

  // Ball Gram matrix.
  {
    const BallQuadrature q = ball_quadrature(d, 2 * n_max);
    std::vector<double> gram(count * count, 0.0);
    for (std::size_t p = 0; p < q.size(); ++p) {
      const auto f = ball_basis_upto(d, n_max, q.point(p));
      for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) gram[i * count + j] += q.weights[p] * f[i] * f[j];
      }
    }
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < count; ++j) {
        r.ball_gram_residual = std::max(r.ball_gram_residual, std::abs(gram[i * count + j] - (i == j ? 1.0 : 0.0)));
      }
    }
  }

  // Cylinder Gram matrix: the weights of g and of <,>_Z combine to the
  // Gegenbauer weight, so the polynomial parts are integrated exactly.
  {
    const SphericalCubature sphere = full_sphere_cubature(d, 2 * n_max);
    const QuadratureRule rule = gauss_gegenbauer_rule(0.5 * (d - 1), n_max + 1);
    std::vector<double> gram(count * count, 0.0);
    std::vector<double> p(count);
    for (std::size_t nu = 0; nu < sphere.size(); ++nu) {
      const auto Y = solid_harmonics_upto(d, n_max, sphere.point(nu));
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto cn = gegenbauer_all(lambda, n_max, rule.nodes[i]);
        for (std::size_t a = 0; a < count; ++a) {
          const auto& idx = indices[a];
          p[a] = cn[idx.n] / std::sqrt(gegenbauer_norm(lambda, idx.n)) * Y[harmonic_offset(d, idx.n - 2 * idx.k) + idx.j - 1];
        }
        const double w = sphere.weights[nu] * rule.weights[i];
        for (std::size_t a = 0; a < count; ++a) {
          for (std::size_t b = 0; b < count; ++b) gram[a * count + b] += w * p[a] * p[b];
        }
      }
    }
    for (std::size_t a = 0; a < count; ++a) {
      for (std::size_t b = 0; b < count; ++b) {
        r.cylinder_gram_residual = std::max(r.cylinder_gram_residual, std::abs(gram[a * count + b] - (a == b ? 1.0 : 0.0)));
      }
    }
  }

  // Reproducing kernel: basis sum against the sphere integral on a symmetric cubature of degree 2n.
  {
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = random_ball_point(d, rng);
      const auto y = random_ball_point(d, rng);
      const auto fx = ball_basis_upto(d, n_max, x);
      const auto fy = ball_basis_upto(d, n_max, y);
      for (int n = 0; n <= n_max; ++n) {
        double basis_sum = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
          if (indices[i].n == n) basis_sum += fx[i] * fy[i];
        }
        const SphericalCubature c = d == 2 ? half_circle_directions(n) : sphere_product_cubature(n);
        double sphere_sum = 0.0;
        for (std::size_t nu = 0; nu < c.size(); ++nu) {
          const auto xi = c.point(nu);
          double u = 0.0, v = 0.0;
          for (int a = 0; a < d; ++a) {
            u += x[a] * xi[a];
            v += y[a] * xi[a];
          }
          sphere_sum += c.weights[nu] * gegenbauer(lambda, n, u) * gegenbauer(lambda, n, v);
        }
        sphere_sum *= (n + lambda) / lambda;
        r.kernel_residual = std::max(r.kernel_residual, std::abs(basis_sum - sphere_sum));
      }
    }
  }

  // gamma_n measured as ||R f||_Z / ||f||_B, averaged over the (k, j) of each n.
  {
    const SphericalCubature sphere = full_sphere_cubature(d, 2 * n_max);
    const QuadratureRule rule = gauss_gegenbauer_rule(0.5 * (d - 1), n_max + 1);
    std::vector<double> rz(count, 0.0);
    for (std::size_t nu = 0; nu < sphere.size(); ++nu) {
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const auto rf = radon_numeric_basis(d, n_max, sphere.point(nu), t, refinement);
        const double w = sphere.weights[nu] * rule.weights[i];
        const double scale = std::pow(1.0 - t * t, -0.5 * (d - 1));
        for (std::size_t a = 0; a < count; ++a) rz[a] += w * std::pow(rf[a] * scale, 2);
      }
    }
    const BallQuadrature q = ball_quadrature(d, 2 * n_max);
    std::vector<double> fb(count, 0.0);
    for (std::size_t p = 0; p < q.size(); ++p) {
      const auto f = ball_basis_upto(d, n_max, q.point(p));
      for (std::size_t a = 0; a < count; ++a) fb[a] += q.weights[p] * f[a] * f[a];
    }
    r.gamma.resize(n_max + 1);
    r.measured_gamma.assign(n_max + 1, 0.0);
    std::vector<int> members(n_max + 1, 0);
    for (std::size_t a = 0; a < count; ++a) {
      r.measured_gamma[indices[a].n] += std::sqrt(rz[a] / fb[a]);
      ++members[indices[a].n];
    }
    for (int n = 0; n <= n_max; ++n) {
      r.gamma[n] = singular_value(d, n);
      r.measured_gamma[n] /= members[n];
    }
  }
  return r;
}

}  // namespace oped
