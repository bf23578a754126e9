// Scalar reference kernels. The SIMD variants are tested against these.

#include <cmath>
#include <cstddef>

#include "tables.hpp"

namespace see::kernels::detail {
namespace {

template <class T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, std::size_t a_rs,
          std::size_t a_cs, const T* b, std::size_t ldb, T* c, std::size_t ldc, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    T* crow = c + i * ldc;
    if (!accumulate) {
      for (std::size_t j = 0; j < n; ++j) crow[j] = T(0);
    }
    for (std::size_t p = 0; p < k; ++p) {
      const T aip = a[i * a_rs + p * a_cs];
      const T* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

template <class T>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c,
             bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* arow = a + i * k;
    for (std::size_t j = 0; j < n; ++j) {
      const T* brow = b + j * k;
      T sum = T(0);
      for (std::size_t p = 0; p < k; ++p) sum += arow[p] * brow[p];
      c[i * n + j] = accumulate ? c[i * n + j] + sum : sum;
    }
  }
}

template <class T>
void transpose(const T* src, std::size_t rows, std::size_t cols, T* dst) {
  constexpr std::size_t B = 16;
  for (std::size_t r0 = 0; r0 < rows; r0 += B)
    for (std::size_t c0 = 0; c0 < cols; c0 += B) {
      const std::size_t re = r0 + B < rows ? r0 + B : rows;
      const std::size_t ce = c0 + B < cols ? c0 + B : cols;
      for (std::size_t r = r0; r < re; ++r)
        for (std::size_t c = c0; c < ce; ++c) dst[c * rows + r] = src[r * cols + c];
    }
}

template <class T>
void bias_activation(T* y, std::size_t m, std::size_t n, const T* bias, bool relu) {
  for (std::size_t i = 0; i < m; ++i) {
    T* row = y + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      const T v = row[j] + bias[j];
      row[j] = (relu && !(v > T(0))) ? T(0) : v;
    }
  }
}

template <class T>
void relu_backward(T* grad, const T* activation, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!(activation[i] > T(0))) grad[i] = T(0);
  }
}

template <class T>
void column_sum_accumulate(const T* x, std::size_t m, std::size_t n, T* out) {
  for (std::size_t i = 0; i < m; ++i) {
    const T* row = x + i * n;
    for (std::size_t j = 0; j < n; ++j) out[j] += row[j];
  }
}

template <class T>
void adam(T* params, const T* grads, T* m1, T* m2, std::size_t count, T lr, T beta1, T beta2,
          T bc1, T bc2, T eps) {
  const T one_minus_b1 = T(1) - beta1;
  const T one_minus_b2 = T(1) - beta2;
  for (std::size_t i = 0; i < count; ++i) {
    const T g = grads[i];
    const T m = beta1 * m1[i] + one_minus_b1 * g;
    const T v = beta2 * m2[i] + one_minus_b2 * (g * g);
    m1[i] = m;
    m2[i] = v;
    const T m_hat = m / bc1;
    const T v_hat = v / bc2;
    params[i] = params[i] - lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

template <class T>
void polyak(T* target, const T* online, std::size_t count, T tau) {
  const T keep = T(1) - tau;
  for (std::size_t i = 0; i < count; ++i) target[i] = keep * target[i] + tau * online[i];
}

template <class T>
void clip(T* values, std::size_t count, T limit) {
  for (std::size_t i = 0; i < count; ++i) {
    T v = values[i];
    v = v < -limit ? -limit : v;
    v = v > limit ? limit : v;
    values[i] = v;
  }
}

template <class T>
constexpr Ops<T> make_ops() {
  return Ops<T>{&gemm<T>,        &gemm_nt<T>, &transpose<T>, &bias_activation<T>, &relu_backward<T>,
                &column_sum_accumulate<T>, &adam<T>, &polyak<T>, &clip<T>};
}

}  // namespace

const Ops<float> scalar_f32 = make_ops<float>();
const Ops<double> scalar_f64 = make_ops<double>();

}  // namespace see::kernels::detail
