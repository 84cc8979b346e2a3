#include <immintrin.h>

#include "kernels/variants.hpp"

namespace oped::kernels::detail {

void series_avx512(const SeriesArgs& a) {
  std::size_t i = 0;
  const __m512d zero = _mm512_setzero_pd();
  for (; i + 8 <= a.count; i += 8) {
    __m512d u = zero;
    for (int c = 0; c < a.dim; ++c) {
      u = _mm512_fmadd_pd(_mm512_set1_pd(a.xi[c]), _mm512_loadu_pd(a.coords[c] + i), u);
    }
    __m512d y1 = zero, y2 = zero;
    for (int k = a.degree; k >= 0; --k) {
      __m512d y = _mm512_fmadd_pd(_mm512_set1_pd(a.beta[k + 1]), y2, _mm512_set1_pd(a.coeffs[k]));
      y = _mm512_fmadd_pd(_mm512_mul_pd(_mm512_set1_pd(a.alpha[k]), u), y1, y);
      y2 = y1;
      y1 = y;
    }
    _mm512_storeu_pd(a.out + i, y1);
  }
  for (; i < a.count; ++i) a.out[i] = clenshaw_one(a, project(a, i));
}

}  // namespace oped::kernels::detail
