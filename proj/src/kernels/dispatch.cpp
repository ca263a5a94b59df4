#include <cstdlib>
#include <string>

#include "pairscatter/kernels.hpp"

namespace pairscatter::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

Isa choose() {
  if (const char* env = std::getenv("PAIRSCATTER_SIMD"); env && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  if (avx2_table() != nullptr && cpu_has_avx2()) return Isa::kAvx2;
  return Isa::kScalar;
}

}  // namespace

Isa active_isa() {
  static const Isa isa = choose();
  return isa;
}

const KernelTable& active() {
  static const KernelTable& table = active_isa() == Isa::kAvx2 ? *avx2_table() : scalar_table();
  return table;
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace pairscatter::kernels
