#include <cstdlib>
#include <cstring>

#include "compumat/simd/pair_kernel.hpp"

namespace compumat::simd {
namespace {

Isa detect() {
  if (const char* force = std::getenv("COMPUMAT_SIMD"); force != nullptr && std::strcmp(force, "scalar") == 0)
    return Isa::scalar;
  return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(COMPUMAT_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa isa = detect();
  return isa;
}

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

PairSums pair_sums(Isa isa, const DipoleLayer& lower, const DipoleLayer& upper, double dz) {
#if defined(COMPUMAT_HAVE_AVX2)
  if (isa == Isa::avx2 && isa_supported(Isa::avx2)) return pair_sums_avx2(lower, upper, dz);
#endif
  (void)isa;
  return pair_sums_scalar(lower, upper, dz);
}

PairSums pair_sums(const DipoleLayer& lower, const DipoleLayer& upper, double dz) {
  return pair_sums(active_isa(), lower, upper, dz);
}

}  // namespace compumat::simd
