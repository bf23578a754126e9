#include <atomic>
#include <cstdlib>
#include <string>

#include "see/errors.hpp"
#include "tables.hpp"

namespace see::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(SEE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  Isa isa = best_isa();
  if (const char* env = std::getenv("SEE_ISA")) {
    const std::string want(env);
    if (want == "scalar") isa = Isa::scalar;
    // Asking for avx2 on a machine without it silently keeps the best
    // supported variant.
  }
  return isa;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2: {
      static const bool has = cpu_has_avx2();
      return has;
    }
  }
  return false;
}

Isa best_isa() noexcept { return isa_supported(Isa::avx2) ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa))
    throw ConfigError("kernel variant '" + std::string(isa_name(isa)) + "' is not supported here");
  active().store(isa, std::memory_order_relaxed);
}

template <>
const Ops<float>& ops_for<float>(Isa isa) {
#if defined(SEE_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_f32;
#endif
  (void)isa;
  return detail::scalar_f32;
}

template <>
const Ops<double>& ops_for<double>(Isa isa) {
#if defined(SEE_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_f64;
#endif
  (void)isa;
  return detail::scalar_f64;
}

}  // namespace see::kernels
