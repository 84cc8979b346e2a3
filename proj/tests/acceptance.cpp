// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oped/geometry.hpp"
#include "oped/grid.hpp"
#include "oped/oped.hpp"
#include "oped/phantom.hpp"
#include "oped/radon.hpp"
#include "oped/specfun.hpp"
#include "oped/svd.hpp"

using namespace oped;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] C%d %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void info(const std::string& line) {
  std::printf("       %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double max_error(const ImageGrid& g, const Polynomial& p) {
  double e = 0.0;
  double x[3];
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g.mask[i]) continue;
    g.point(i, x);
    e = std::max(e, std::abs(g.values[i] - p.eval(std::span<const double>(x, g.dim))));
  }
  return e;
}

double grid_max(const ImageGrid& g) {
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.mask[i]) m = std::max(m, g.values[i]);
  }
  return m;
}

ReconstructionConfig at_resolution(int r) {
  ReconstructionConfig c;
  c.resolution = r;
  return c;
}

void criterion1() {
  constexpr double kTol = 1e-8;
  constexpr double kBudget = 60.0;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  std::string detail;
  for (int m : {2, 4, 8, 16}) {
    std::array<double, 2> type_err{0.0, 0.0};
    std::array<double, 2> below{0.0, 0.0};
    for (int trial = 0; trial < 20; ++trial) {
      const Polynomial p = Polynomial::random(2, 2 * m, rng);
      const Polynomial q = Polynomial::random(2, 2 * m - 1, rng);
      for (int ti = 0; ti < 2; ++ti) {
        const auto g = make_geometry(2, ti == 0 ? ScanType::TypeI : ScanType::TypeII, m);
        type_err[ti] = std::max(type_err[ti], max_error(oped2d(sample_sinogram(Source(p), g, {}), at_resolution(128)), p));
        below[ti] = std::max(below[ti], max_error(oped2d(sample_sinogram(Source(q), g, {}), at_resolution(128)), q));
      }
    }
    worst = std::max({worst, type_err[0], type_err[1]});
    detail += fmt(" 2m=%-2.0f", 2.0 * m) + fmt(" I=%.2e", type_err[0]) + fmt(" II=%.2e;", type_err[1]);
    info(fmt("degree 2m-1 = %.0f:", 2.0 * m - 1) + fmt(" type I max err %.2e,", below[0]) +
         fmt(" type II max err %.2e", below[1]));
  }
  const double t = seconds_since(t0);
  report(1, "polynomial preservation d=2 (deg <= 2m, 20 polys, 128^2, types I/II)",
         worst < kTol && t < kBudget,
         "max err " + fmt("%.3e", worst) + fmt(" (tol %.0e)", kTol) + fmt(", %.1fs (budget 60s);", t) + detail);
}

void criterion2() {
  constexpr double kTol = 1e-7;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240602);
  double worst = 0.0;
  std::string detail;
  for (int n : {2, 4, 6}) {
    double e = 0.0;
    const auto g = make_geometry(3, ScanType::GegenbauerGauss, n);
    for (int trial = 0; trial < 10; ++trial) {
      const Polynomial p = Polynomial::random(3, n, rng);
      e = std::max(e, max_error(oped3d(sample_sinogram(Source(p), g, {}), at_resolution(48)), p));
    }
    worst = std::max(worst, e);
    detail += fmt(" n=%.0f", n) + fmt(" %.2e;", e);
  }
  const double t = seconds_since(t0);
  report(2, "3D polynomial preservation (deg <= n, 10 polys, 48^3)", worst < kTol && t < 300.0,
         "max err " + fmt("%.3e", worst) + fmt(" (tol %.0e)", kTol) + fmt(", %.1fs (budget 300s);", t) + detail);
}

void criteria_svd() {
  // 3: pair identity, 5: kernel identity, both d in {2, 3}
  double pair = 0.0, kernel = 0.0;
  std::string pd, kd;
  for (int d = 2; d <= 3; ++d) {
    const auto r6 = svd_verify(d, 6, 20);
    pair = std::max(pair, r6.max_pair_residual);
    pd += fmt(" d=%.0f", d) + fmt(" %.2e;", r6.max_pair_residual);
    const auto r4 = svd_verify(d, 4, 4);
    kernel = std::max(kernel, r4.kernel_residual);
    kd += fmt(" d=%.0f", d) + fmt(" %.2e;", r4.kernel_residual);
  }
  report(3, "singular-pair identity (n <= 6, 20x20 lattice)", pair < 1e-7,
         "max |R f - gamma g| " + fmt("%.3e", pair) + " (tol 1e-7);" + pd);

  const auto r8 = svd_verify(2, 8, 6);
  double gamma_err = 0.0;
  for (std::size_t n = 0; n < r8.gamma.size(); ++n) gamma_err = std::max(gamma_err, std::abs(r8.measured_gamma[n] - r8.gamma[n]));
  report(4, "gamma_n closed form (d=2, n <= 8)", gamma_err < 1e-6,
         "max |measured - b_(d-1) sqrt(n!/(d)_n)| " + fmt("%.3e", gamma_err) + " (tol 1e-6)");

  report(5, "reproducing-kernel identity (n <= 4, 10 pairs)", kernel < 1e-8,
         "max residual " + fmt("%.3e", kernel) + " (tol 1e-8);" + kd);
}

void criterion6() {
  constexpr int N = 16;
  const auto g = make_geometry(2, ScanType::GegenbauerGauss, N);
  const auto s = sample_sinogram(shepp_logan_2d(), g, {});
  const auto a = reconstruct_grid(s, at_resolution(128));
  const auto b = truncated_svd_reconstruct(s, N, 128);
  double delta = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.mask[i]) delta = std::max(delta, std::abs(a.values[i] - b.values[i]));
  }
  report(6, "truncated SVD equals OPED (Shepp-Logan, N=16, 128^2)", delta < 1e-6,
         "max |S_N* - A_N| " + fmt("%.3e", delta) + " (tol 1e-6)");
}

void criterion7() {
  std::mt19937_64 rng(20240607);
  double worst = 0.0;
  std::string detail;
  for (int n : {4, 8}) {
    double e = 0.0;
    const auto g = make_geometry(2, ScanType::TypeII, n);  // operator degree 2n
    for (int trial = 0; trial < 10; ++trial) {
      const Polynomial p = Polynomial::random(2, n, rng);
      e = std::max(e, max_error(smoothed_reconstruct(sample_sinogram(Source(p), g, {}), n, at_resolution(128)), p));
    }
    worst = std::max(worst, e);
    detail += fmt(" n=%.0f", n) + fmt(" %.2e;", e);
  }
  report(7, "smoothed operator reproduces deg <= n (order-2n geometry)", worst < 1e-8,
         "max err " + fmt("%.3e", worst) + " (tol 1e-8);" + detail);
}

double sphere_moment(const std::vector<int>& a) {
  double log_num = 0.0;
  int total = 0;
  for (int e : a) {
    if (e % 2) return 0.0;
    log_num += std::lgamma(0.5 * (e + 1));
    total += e;
  }
  const double d = static_cast<double>(a.size());
  const double log_surface = std::log(2.0) + 0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d);
  return std::exp(std::log(2.0) + log_num - std::lgamma(0.5 * (total + d)) - log_surface);
}

/// Moments over the ball for the normalized measure b_d^-1 dx.
double ball_moment(const std::vector<int>& a) {
  int total = 0;
  for (int e : a) total += e;
  return sphere_moment(a) * static_cast<double>(a.size()) / (total + static_cast<double>(a.size()));
}

template <class Points, class Moment>
double monomial_suite(int dim, int degree, bool even_only, Points&& integrate, Moment&& moment) {
  double worst = 0.0;
  for (int a = 0; a <= degree; ++a) {
    for (int b = 0; a + b <= degree; ++b) {
      for (int c = 0; a + b + c <= degree; ++c) {
        if (dim == 2 && c > 0) break;
        if (even_only && (a + b + c) % 2) continue;
        std::vector<int> e = dim == 2 ? std::vector<int>{a, b} : std::vector<int>{a, b, c};
        worst = std::max(worst, std::abs(integrate(e) - moment(e)));
      }
    }
  }
  return worst;
}

double cubature_suite(const SphericalCubature& c, int degree, bool even_only) {
  return monomial_suite(
      c.dim, degree, even_only,
      [&](const std::vector<int>& e) {
        double s = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
          double v = c.weights[i];
          for (int k = 0; k < c.dim; ++k) v *= std::pow(c.point(i)[k], e[k]);
          s += v;
        }
        return s;
      },
      sphere_moment);
}

void criterion8() {
  double worst = 0.0;
  int rules = 0;
  auto line_rule = [&](const QuadratureRule& r) {
    ++rules;
    for (int p = 0; p <= r.exact_degree; ++p) {
      const double q = r.integrate([&](double t) { return std::pow(t, p); });
      worst = std::max(worst, std::abs(q - normalized_moment(r.weight_exponent, p)));
    }
  };
  for (int n = 1; n <= 64; ++n) {
    line_rule(gauss_legendre_rule(n));
    line_rule(gauss_gegenbauer_rule(-0.5, n));
    line_rule(gauss_gegenbauer_rule(0.5, n));
    line_rule(gauss_gegenbauer_rule(1.0, n));
    if (n >= 2) line_rule(folded_chebyshev_rule(n));
  }
  for (int m = 0; m <= 32; ++m) {
    ++rules;
    const auto c = circle_directions(m);
    worst = std::max(worst, cubature_suite(c, c.degree, true));
  }
  for (int n = 0; n <= 32; ++n) {
    ++rules;
    worst = std::max(worst, cubature_suite(half_circle_directions(n), 2 * n, true));
  }
  for (int n = 0; n <= 12; ++n) {
    ++rules;
    worst = std::max(worst, cubature_suite(sphere_product_cubature(n), 2 * n, true));
  }
  for (int deg = 0; deg <= 16; ++deg) {
    rules += 4;
    worst = std::max(worst, cubature_suite(full_sphere_cubature(2, deg), deg, false));
    worst = std::max(worst, cubature_suite(full_sphere_cubature(3, deg), deg, false));
    for (int d = 2; d <= 3; ++d) {
      const auto q = ball_quadrature(d, deg);
      worst = std::max(worst, monomial_suite(
                                  d, deg, false,
                                  [&](const std::vector<int>& e) {
                                    double s = 0.0;
                                    for (std::size_t i = 0; i < q.size(); ++i) {
                                      double v = q.weights[i];
                                      for (int k = 0; k < d; ++k) v *= std::pow(q.point(i)[k], e[k]);
                                      s += v;
                                    }
                                    return s;
                                  },
                                  ball_moment));
    }
  }
  report(8, "quadrature/cubature moment suites to stated degree", worst < 1e-10,
         fmt("%.0f rules, ", rules) + "max moment error " + fmt("%.3e", worst) + " (tol 1e-10)");
}

void criterion9() {
  constexpr int kRes = 256;
  const Phantom sl = shepp_logan_2d();
  std::vector<double> err, lam;
  std::string detail;
  for (int m : {16, 32, 64}) {
    const auto g = make_geometry(2, ScanType::TypeII, m);
    const auto rec = reconstruct_grid(sample_sinogram(sl, g, {}), at_resolution(kRes));
    err.push_back(compare_to_source(rec, sl).relative_l2);
    lam.push_back(grid_max(lebesgue_grid(g, g.operator_degree(), kRes)));
    detail += fmt(" m=%.0f", m) + fmt(" relL2=%.4f", err.back()) + fmt(" maxLambda=%.2f;", lam.back());
  }
  const bool pass = err[0] > err[1] && err[1] > err[2] && lam[0] < lam[1] && lam[1] < lam[2];
  report(9, "convergence trend (type II, m in {16,32,64}, 256^2)", pass,
         "relative L2 strictly decreasing and max Lambda increasing:" + detail);
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion1();
  criterion2();
  criteria_svd();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria failed (%.1fs)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
