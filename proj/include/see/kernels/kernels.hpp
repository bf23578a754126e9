#pragma once

// Dense arithmetic kernels behind the network code. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2+FMA variant. The variant
// is picked once at start-up from CPUID and can be overridden with the
// SEE_ISA environment variable ("scalar" or "avx2") or set_isa().
//
// All matrices are row-major. Kernels never allocate.

#include <cstddef>
#include <string_view>

namespace see::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the CPU (and the build) can run `isa`.
bool isa_supported(Isa isa) noexcept;

/// Best variant available on this machine.
Isa best_isa() noexcept;

/// Variant currently used by ops<T>().
Isa active_isa() noexcept;

/// Throws ConfigError if `isa` is not supported.
void set_isa(Isa isa);

template <class T>
struct Ops {
  /// C[m x n] (=|+=) A[m x k] * B[k x n].
  /// A is addressed as a[i * a_row_stride + p * a_col_stride], so passing
  /// (1, lda) multiplies by a transposed operand. B and C are dense with
  /// leading dimensions ldb and ldc.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t a_row_stride,
               std::size_t a_col_stride, const T* b, std::size_t ldb, T* c, std::size_t ldc,
               bool accumulate);

  /// C[m x n] (=|+=) A[m x k] * B[n x k]^T computed as row dot products.
  /// Preferred over gemm for very small m where transposing B does not pay.
  void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c,
                  bool accumulate);

  /// dst[c][r] = src[r][c] for a rows x cols source.
  void (*transpose)(const T* src, std::size_t rows, std::size_t cols, T* dst);

  /// y[i][j] = act(y[i][j] + bias[j]); act is ReLU when `relu`, else identity.
  void (*bias_activation)(T* y, std::size_t m, std::size_t n, const T* bias, bool relu);

  /// grad[i] = activation[i] > 0 ? grad[i] : 0.
  void (*relu_backward)(T* grad, const T* activation, std::size_t count);

  /// out[j] += sum_i x[i][j].
  void (*column_sum_accumulate)(const T* x, std::size_t m, std::size_t n, T* out);

  /// One Adam update with precomputed bias corrections (1 - beta^t).
  void (*adam)(T* params, const T* grads, T* first_moment, T* second_moment, std::size_t count,
               T lr, T beta1, T beta2, T bias_correction1, T bias_correction2, T eps);

  /// target = (1 - tau) * target + tau * online.
  void (*polyak)(T* target, const T* online, std::size_t count, T tau);

  /// Elementwise clamp to [-limit, limit].
  void (*clip)(T* values, std::size_t count, T limit);
};

template <class T>
const Ops<T>& ops_for(Isa isa);

template <class T>
const Ops<T>& ops() {
  return ops_for<T>(active_isa());
}

}  // namespace see::kernels
