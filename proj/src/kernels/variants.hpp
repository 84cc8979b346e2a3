#pragma once

#include "oped/kernels.hpp"

namespace oped::kernels::detail {

void series_scalar(const SeriesArgs& a);
#if defined(OPED_BUILD_AVX2)
void series_avx2(const SeriesArgs& a);
#endif
#if defined(OPED_BUILD_AVX512)
void series_avx512(const SeriesArgs& a);
#endif

/// Clenshaw at a single abscissa; shared by the reference and the SIMD tails.
inline double clenshaw_one(const SeriesArgs& a, double u) {
  double y1 = 0.0, y2 = 0.0;
  for (int k = a.degree; k >= 0; --k) {
    const double y = a.coeffs[k] + a.alpha[k] * u * y1 + a.beta[k + 1] * y2;
    y2 = y1;
    y1 = y;
  }
  return y1;
}

inline double project(const SeriesArgs& a, std::size_t i) {
  double u = 0.0;
  for (int c = 0; c < a.dim; ++c) u += a.xi[c] * a.coords[c][i];
  return u;
}

}  // namespace oped::kernels::detail
