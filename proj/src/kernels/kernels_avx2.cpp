#include <immintrin.h>

#include "kernels/variants.hpp"

namespace oped::kernels::detail {

void series_avx2(const SeriesArgs& a) {
  std::size_t i = 0;
  const __m256d zero = _mm256_setzero_pd();
  for (; i + 4 <= a.count; i += 4) {
    __m256d u = zero;
    for (int c = 0; c < a.dim; ++c) {
      u = _mm256_fmadd_pd(_mm256_set1_pd(a.xi[c]), _mm256_loadu_pd(a.coords[c] + i), u);
    }
    __m256d y1 = zero, y2 = zero;
    for (int k = a.degree; k >= 0; --k) {
      // y = c_k + alpha_k u y1 + beta_{k+1} y2
      __m256d y = _mm256_fmadd_pd(_mm256_set1_pd(a.beta[k + 1]), y2, _mm256_set1_pd(a.coeffs[k]));
      y = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_set1_pd(a.alpha[k]), u), y1, y);
      y2 = y1;
      y1 = y;
    }
    _mm256_storeu_pd(a.out + i, y1);
  }
  for (; i < a.count; ++i) a.out[i] = clenshaw_one(a, project(a, i));
}

}  // namespace oped::kernels::detail
