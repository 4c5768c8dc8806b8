#include <atomic>
#include <cstdlib>
#include <cstring>

#include "nwmix/kernels.hpp"

namespace nwmix::kernels {

#if defined(NWMIX_HAVE_AVX2)
const KernelTable& avx2_table_impl() noexcept;
#endif

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() noexcept {
#if defined(NWMIX_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable* initial_choice() noexcept {
  if (const char* env = std::getenv("NWMIX_KERNELS"); env && std::strcmp(env, "scalar") == 0)
    return &scalar_table();
  if (const KernelTable* t = avx2_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> current{initial_choice()};
  return current;
}

}  // namespace

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool force_isa(Isa isa) noexcept {
  const KernelTable* table = isa == Isa::scalar ? &scalar_table() : avx2_table();
  if (!table) return false;
  slot().store(table, std::memory_order_release);
  return true;
}

}  // namespace nwmix::kernels
