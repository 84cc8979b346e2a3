#pragma once

// Inner loop of every reconstruction: evaluate a three-term-recurrence series
// sum_k c_k P_k(u) at u_i = <x_i, xi> for a batch of points. A scalar
// reference and AVX2 / AVX-512 variants are selected at runtime.

#include <cstddef>
#include <string>
#include <vector>

namespace oped::kernels {

enum class Isa { Scalar, Avx2, Avx512 };

const char* isa_name(Isa isa);
Isa parse_isa(const std::string& name);

/// Variants compiled in *and* supported by this CPU, scalar first.
std::vector<Isa> available_isas();

/// Best available variant unless OPED_ISA (scalar|avx2|avx512) or
/// set_active_isa() says otherwise.
Isa active_isa();
void set_active_isa(Isa isa);

/// P_0 = 1, P_1 = alpha[0] u, P_{k+1} = alpha[k] u P_k + beta[k] P_{k-1}.
/// alpha needs degree+1 entries and beta degree+2.
struct SeriesArgs {
  const double* coeffs = nullptr;  // c_0 .. c_degree
  const double* alpha = nullptr;
  const double* beta = nullptr;
  int degree = 0;
  int dim = 0;
  const double* xi = nullptr;              // dim entries
  const double* const* coords = nullptr;   // coords[axis][i]
  std::size_t count = 0;
  double* out = nullptr;                   // out[i] = series at <x_i, xi>
};

void evaluate_series(Isa isa, const SeriesArgs& args);
inline void evaluate_series(const SeriesArgs& args) { evaluate_series(active_isa(), args); }

}  // namespace oped::kernels
