#include <atomic>
#include <cstdlib>

#include "kernels/variants.hpp"
#include "oped/errors.hpp"

namespace oped::kernels {

namespace {

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(OPED_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Avx512:
#if defined(OPED_BUILD_AVX512) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa initial_isa() {
  if (const char* env = std::getenv("OPED_ISA")) {
    const Isa wanted = parse_isa(env);
    if (!cpu_supports(wanted)) throw ValidationError(std::string("OPED_ISA=") + env + " is not available on this machine");
    return wanted;
  }
  return available_isas().back();
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(initial_isa())};
  return slot;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Avx512: return "avx512";
  }
  return "scalar";
}

Isa parse_isa(const std::string& name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  if (name == "avx512") return Isa::Avx512;
  throw ValidationError("unknown instruction set '" + name + "' (expected scalar, avx2 or avx512)");
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Avx512}) {
    if (cpu_supports(isa)) out.push_back(isa);
  }
  return out;
}

Isa active_isa() { return static_cast<Isa>(active_slot().load()); }

void set_active_isa(Isa isa) {
  if (!cpu_supports(isa)) throw ValidationError(std::string(isa_name(isa)) + " is not available on this machine");
  active_slot().store(static_cast<int>(isa));
}

void evaluate_series(Isa isa, const SeriesArgs& args) {
  switch (isa) {
    case Isa::Scalar: detail::series_scalar(args); return;
#if defined(OPED_BUILD_AVX2)
    case Isa::Avx2:
      if (cpu_supports(isa)) {
        detail::series_avx2(args);
        return;
      }
      break;
#endif
#if defined(OPED_BUILD_AVX512)
    case Isa::Avx512:
      if (cpu_supports(isa)) {
        detail::series_avx512(args);
        return;
      }
      break;
#endif
    default: break;
  }
  throw ValidationError(std::string(isa_name(isa)) + " kernels are not available");
}

}  // namespace oped::kernels
