#include "kernels/variants.hpp"

namespace oped::kernels::detail {

void series_scalar(const SeriesArgs& a) {
  for (std::size_t i = 0; i < a.count; ++i) a.out[i] = clenshaw_one(a, project(a, i));
}

}  // namespace oped::kernels::detail
