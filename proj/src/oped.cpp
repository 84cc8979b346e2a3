#include "oped/oped.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oped/errors.hpp"
#include "oped/kernels.hpp"
#include "oped/parallel.hpp"

namespace oped {

namespace {

constexpr std::size_t kBlock = 256;

double g_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

void check_weight(const ScanGeometry& g) {
  if (std::abs(g.nodes.weight_exponent - 0.5 * (g.dim - 1)) > 1e-12) {
    throw ValidationError("offset rule is not for the weight (1 - t^2)^((d-1)/2)");
  }
  if (g.directions.dim != g.dim) throw ValidationError("direction set dimension differs from the geometry");
}

/// Adds lambda_nu * rows[nu] over nu into out, rows laid out [nu][count].
void reduce_views(std::vector<double>& rows, std::size_t views, std::size_t count, std::span<const double> lambda,
                  Summation mode, double* out) {
  if (mode == Summation::Sequential) {
    for (std::size_t i = 0; i < count; ++i) out[i] = 0.0;
    for (std::size_t nu = 0; nu < views; ++nu) {
      const double* row = rows.data() + nu * count;
      for (std::size_t i = 0; i < count; ++i) out[i] += lambda[nu] * row[i];
    }
    return;
  }
  for (std::size_t nu = 0; nu < views; ++nu) {
    double* row = rows.data() + nu * count;
    for (std::size_t i = 0; i < count; ++i) row[i] *= lambda[nu];
  }
  for (std::size_t step = 1; step < views; step *= 2) {
    for (std::size_t nu = 0; nu + step < views; nu += 2 * step) {
      double* a = rows.data() + nu * count;
      const double* b = rows.data() + (nu + step) * count;
      for (std::size_t i = 0; i < count; ++i) a[i] += b[i];
    }
  }
  std::copy_n(rows.data(), count, out);
}

kernels::SeriesArgs series_args(const KernelTable& table, const double* coeffs) {
  kernels::SeriesArgs a;
  a.coeffs = coeffs;
  a.alpha = table.alpha.data();
  a.beta = table.beta.data();
  a.degree = table.max_degree();
  a.dim = table.dim;
  return a;
}

std::vector<double> gegenbauer_row(int dim, int degree, double t) {
  return gegenbauer_all(0.5 * dim, degree, t);
}

}  // namespace

double eta(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double a = g_exp(2.0 - t);
  const double b = g_exp(t - 1.0);
  return a / (a + b);
}

std::string to_string(Filter f) { return f == Filter::Eta ? "eta" : "none"; }
std::string to_string(Summation s) { return s == Summation::Pairwise ? "pairwise" : "sequential"; }

Filter parse_filter(const std::string& s) {
  if (s == "none") return Filter::None;
  if (s == "eta") return Filter::Eta;
  throw ValidationError("unknown filter '" + s + "' (expected none or eta)");
}

Summation parse_summation(const std::string& s) {
  if (s == "sequential") return Summation::Sequential;
  if (s == "pairwise") return Summation::Pairwise;
  throw ValidationError("unknown summation mode '" + s + "' (expected sequential or pairwise)");
}

KernelTable KernelTable::make(int dim, int order, Filter filter) {
  if (dim < 2) throw ValidationError("kernel dimension must be at least 2");
  if (order < 0) throw ValidationError("kernel order must be non-negative");
  if (filter == Filter::Eta && order < 1) throw ValidationError("the eta filter needs order >= 1");
  KernelTable t;
  t.dim = dim;
  t.order = order;
  t.filter = filter;
  const int kmax = filter == Filter::Eta ? 2 * order : order;
  const double lambda = 0.5 * dim;
  t.eta.resize(kmax + 1);
  t.factor.resize(kmax + 1);
  for (int k = 0; k <= kmax; ++k) {
    t.eta[k] = filter == Filter::Eta ? oped::eta(static_cast<double>(k) / order) : 1.0;
    t.factor[k] = t.eta[k] * (k + lambda) / lambda;
  }
  t.alpha.resize(kmax + 1);
  t.beta.assign(kmax + 2, 0.0);
  for (int k = 0; k <= kmax; ++k) t.alpha[k] = 2.0 * (k + lambda) / (k + 1);
  for (int k = 1; k <= kmax + 1; ++k) t.beta[k] = -(k + 2.0 * lambda - 1.0) / (k + 1);
  return t;
}

double KernelTable::phi(double t, double u) const {
  const auto ct = gegenbauer_row(dim, max_degree(), t);
  const auto cu = gegenbauer_row(dim, max_degree(), u);
  double s = 0.0;
  for (int k = 0; k <= max_degree(); ++k) s += factor[k] * ct[k] * cu[k];
  return s;
}

double phi_kernel(int d, int n, double t, double u, Filter filter) { return KernelTable::make(d, n, filter).phi(t, u); }

std::vector<double> radon_node_weights(const ScanGeometry& g) {
  check_weight(g);
  const double b = ball_volume(g.dim - 1);
  std::vector<double> w(g.offsets());
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double t = g.nodes.nodes[j];
    w[j] = g.nodes.weights[j] / (b * std::pow(1.0 - t * t, 0.5 * (g.dim - 1)));
  }
  return w;
}

int reconstruction_order(const Sinogram& s, const ReconstructionConfig& config) {
  const ScanGeometry& g = s.geometry;
  check_weight(g);
  if (s.values.size() != g.views() * g.offsets()) throw ValidationError("sinogram value count does not match its geometry");
  if (config.type != ScanType::Custom && config.type != g.type) {
    throw ValidationError("scan type mismatch: sinogram is " + to_string(g.type) + ", requested " + to_string(config.type));
  }
  if (config.order != 0 && config.order != g.order) {
    throw ValidationError("order mismatch: sinogram has order " + std::to_string(g.order) + ", requested " +
                          std::to_string(config.order));
  }
  for (double v : s.values) {
    if (!std::isfinite(v)) throw ValidationError("sinogram contains non-finite values");
  }
  const int n = g.operator_degree();
  if (config.filter == Filter::Eta) {
    if (n < 2) throw ValidationError("the eta filter needs an operator degree of at least 2");
    return n / 2;
  }
  return n;
}

std::vector<double> reconstruct_points(const Sinogram& s, const ReconstructionConfig& config,
                                       const std::vector<std::vector<double>>& coords) {
  const int n = reconstruction_order(s, config);
  const ScanGeometry& g = s.geometry;
  if (static_cast<int>(coords.size()) != g.dim) throw ValidationError("point dimension differs from the sinogram");
  const std::size_t count = coords.empty() ? 0 : coords[0].size();
  const KernelTable table = KernelTable::make(g.dim, n, config.filter);
  const int K = table.max_degree();
  const std::size_t views = g.views();

  // c_nu[k] = factor_k sum_j W_j R(nu, j) C_k(t_j)
  const std::vector<double> W = radon_node_weights(g);
  std::vector<double> node_values(g.offsets() * (K + 1));
  for (std::size_t j = 0; j < g.offsets(); ++j) {
    const auto row = gegenbauer_row(g.dim, K, g.nodes.nodes[j]);
    std::copy(row.begin(), row.end(), node_values.begin() + j * (K + 1));
  }
  std::vector<double> coeffs(views * (K + 1), 0.0);
  for (std::size_t nu = 0; nu < views; ++nu) {
    double* c = coeffs.data() + nu * (K + 1);
    for (std::size_t j = 0; j < g.offsets(); ++j) {
      const double a = W[j] * s.at(nu, j);
      const double* cv = node_values.data() + j * (K + 1);
      for (int k = 0; k <= K; ++k) c[k] += a * cv[k];
    }
    for (int k = 0; k <= K; ++k) c[k] *= table.factor[k];
  }

  std::vector<double> out(count, 0.0);
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  const kernels::Isa isa = kernels::active_isa();
  parallel_for(blocks, config.threads, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> rows(views * kBlock);
    std::vector<const double*> cptr(g.dim);
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t begin = b * kBlock;
      const std::size_t len = std::min(kBlock, count - begin);
      for (int a = 0; a < g.dim; ++a) cptr[a] = coords[a].data() + begin;
      for (std::size_t nu = 0; nu < views; ++nu) {
        kernels::SeriesArgs args = series_args(table, coeffs.data() + nu * (K + 1));
        args.xi = g.directions.point(nu).data();
        args.coords = cptr.data();
        args.count = len;
        args.out = rows.data() + nu * len;
        kernels::evaluate_series(isa, args);
      }
      reduce_views(rows, views, len, g.directions.weights, config.summation, out.data() + begin);
    }
  });
  return out;
}

ImageGrid reconstruct_grid(const Sinogram& s, const ReconstructionConfig& config) {
  if (config.resolution < 2) throw ValidationError("grid resolution must be at least 2");
  ImageGrid grid = ImageGrid::make(s.geometry.dim, config.resolution);
  const auto pts = grid.masked_points();
  const auto values = reconstruct_points(s, config, pts.coords);
  for (std::size_t p = 0; p < pts.index.size(); ++p) grid.values[pts.index[p]] = values[p];
  return grid;
}

ImageGrid oped2d(const Sinogram& s, const ReconstructionConfig& config) {
  if (s.geometry.dim != 2 || (s.geometry.type != ScanType::TypeI && s.geometry.type != ScanType::TypeII)) {
    throw ValidationError("oped2d needs a type I or type II sinogram");
  }
  return reconstruct_grid(s, config);
}

ImageGrid oped3d(const Sinogram& s, const ReconstructionConfig& config) {
  if (s.geometry.dim != 3 || s.geometry.type != ScanType::GegenbauerGauss) {
    throw ValidationError("oped3d needs a three-dimensional Gegenbauer-Gauss sinogram");
  }
  return reconstruct_grid(s, config);
}

ImageGrid smoothed_reconstruct(const Sinogram& s, int n, const ReconstructionConfig& config) {
  if (n < 1) throw ValidationError("smoothing order must be positive");
  if (2 * n > s.geometry.operator_degree()) {
    throw ValidationError("smoothing order " + std::to_string(n) + " needs a geometry of degree >= " +
                          std::to_string(2 * n));
  }
  ReconstructionConfig c = config;
  c.filter = Filter::Eta;
  // Smoothing order is independent of the geometry degree; rebuild the
  // sinogram view with a matching operator degree.
  Sinogram view = s;
  if (view.geometry.operator_degree() != 2 * n) {
    view.geometry.type = ScanType::Custom;
    view.geometry.order = 2 * n;
    c.type = ScanType::Custom;
    c.order = 0;
  }
  return reconstruct_grid(view, c);
}

double semi_discrete_partial_sum(const RadonProfile& radon, const SphericalCubature& cubature, int n,
                                 std::span<const double> x, int refinement, Filter filter) {
  const int d = cubature.dim;
  if (static_cast<int>(x.size()) != d) throw ValidationError("point dimension differs from the cubature");
  if (cubature.degree < 2 * n) {
    throw ValidationError("cubature degree " + std::to_string(cubature.degree) + " is below 2n = " + std::to_string(2 * n));
  }
  if (refinement < 1) throw ValidationError("refinement must be positive");
  const KernelTable table = KernelTable::make(d, n, filter);
  const int K = table.max_degree();
  const QuadratureRule gl = gauss_legendre_rule(8);
  const double h = std::numbers::pi / refinement;
  const double bd = ball_volume(d);
  double total = 0.0;
  for (std::size_t nu = 0; nu < cubature.size(); ++nu) {
    const auto xi = cubature.point(nu);
    std::vector<double> a(K + 1, 0.0);
    for (int p = 0; p < refinement; ++p) {
      for (std::size_t q = 0; q < gl.size(); ++q) {
        const double theta = p * h + 0.5 * h * (gl.nodes[q] + 1.0);
        const double t = std::cos(theta);
        const double r = radon(xi, t) * std::sin(theta) * gl.weights[q] * h;
        const auto ck = gegenbauer_row(d, K, t);
        for (int k = 0; k <= K; ++k) a[k] += r * ck[k];
      }
    }
    double u = 0.0;
    for (int c = 0; c < d; ++c) u += xi[c] * x[c];
    const auto cu = gegenbauer_row(d, K, u);
    double s = 0.0;
    for (int k = 0; k <= K; ++k) s += table.factor[k] * a[k] * cu[k];
    total += cubature.weights[nu] * s / bd;
  }
  return total;
}

namespace {

/// Lambda at the given points, coords[axis][i].
std::vector<double> lebesgue_points(const ScanGeometry& g, int n, Filter filter,
                                    const std::vector<std::vector<double>>& coords, int threads) {
  check_weight(g);
  const KernelTable table = KernelTable::make(g.dim, n, filter);
  const int K = table.max_degree();
  const std::size_t offsets = g.offsets();
  // Phi_n(t_j, u) as a series in u: coefficients factor_k C_k(t_j).
  std::vector<double> coeffs(offsets * (K + 1));
  for (std::size_t j = 0; j < offsets; ++j) {
    const auto row = gegenbauer_row(g.dim, K, g.nodes.nodes[j]);
    for (int k = 0; k <= K; ++k) coeffs[j * (K + 1) + k] = table.factor[k] * row[k];
  }
  const std::size_t count = coords[0].size();
  std::vector<double> out(count, 0.0);
  const std::size_t blocks = (count + kBlock - 1) / kBlock;
  const kernels::Isa isa = kernels::active_isa();
  parallel_for(blocks, threads, [&](std::size_t b0, std::size_t b1) {
    std::vector<double> series(kBlock), rows(g.views() * kBlock);
    std::vector<const double*> cptr(g.dim);
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t begin = b * kBlock;
      const std::size_t len = std::min(kBlock, count - begin);
      for (int a = 0; a < g.dim; ++a) cptr[a] = coords[a].data() + begin;
      for (std::size_t nu = 0; nu < g.views(); ++nu) {
        double* row = rows.data() + nu * len;
        std::fill_n(row, len, 0.0);
        for (std::size_t j = 0; j < offsets; ++j) {
          kernels::SeriesArgs args = series_args(table, coeffs.data() + j * (K + 1));
          args.xi = g.directions.point(nu).data();
          args.coords = cptr.data();
          args.count = len;
          args.out = series.data();
          kernels::evaluate_series(isa, args);
          for (std::size_t i = 0; i < len; ++i) row[i] += g.nodes.weights[j] * std::abs(series[i]);
        }
      }
      reduce_views(rows, g.views(), len, g.directions.weights, Summation::Pairwise, out.data() + begin);
    }
  });
  return out;
}

}  // namespace

double lebesgue_function(const ScanGeometry& g, int n, std::span<const double> x, Filter filter) {
  if (static_cast<int>(x.size()) != g.dim) throw ValidationError("point dimension differs from the geometry");
  std::vector<std::vector<double>> coords(g.dim);
  for (int a = 0; a < g.dim; ++a) coords[a] = {x[a]};
  return lebesgue_points(g, n, filter, coords, 1)[0];
}

ImageGrid lebesgue_grid(const ScanGeometry& g, int n, int resolution, Filter filter, int threads) {
  ImageGrid grid = ImageGrid::make(g.dim, resolution);
  const auto pts = grid.masked_points();
  const auto values = lebesgue_points(g, n, filter, pts.coords, threads);
  for (std::size_t p = 0; p < pts.index.size(); ++p) grid.values[pts.index[p]] = values[p];
  return grid;
}

}  // namespace oped
