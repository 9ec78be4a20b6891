#include <atomic>

#include "hle/errors.hpp"
#include "hle/kernels.hpp"

namespace hle::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar: return &scalar_table();
    case Isa::avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
  }
  return nullptr;
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{table_for(best_isa())};
  return current;
}

}  // namespace

Isa best_isa() {
  return table_for(Isa::avx2) != nullptr ? Isa::avx2 : Isa::scalar;
}

Isa active_isa() {
  return slot().load(std::memory_order_relaxed) == &scalar_table() ? Isa::scalar : Isa::avx2;
}

void set_active_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (t == nullptr) throw ConfigError("kernel variant '" + std::string(isa_name(isa)) + "' is not available");
  slot().store(t, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

}  // namespace hle::kernels
