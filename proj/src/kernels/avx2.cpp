// AVX2 + FMA kernels. This translation unit is compiled with -mavx2 -mfma
// -ffp-contract=off. It must not instantiate any inline function or template
// from the standard library: the linker may keep the AVX2 copy and hand it to
// scalar callers on CPUs without AVX2. Everything here has internal linkage
// except the two tables at the bottom.
//
// Elementwise kernels and transpose use the same operation order as the
// scalar reference and no FMA, so their results are bit-identical to it. gemm uses FMA and
// gemm_nt reorders the reduction, so those only agree to rounding.

#include <immintrin.h>

#include <cstddef>
#include <cstdint>

#include "tables.hpp"

namespace see::kernels::detail {
namespace {

alignas(32) const std::int32_t kMask32[16] = {-1, -1, -1, -1, -1, -1, -1, -1,
                                               0,  0,  0,  0,  0,  0,  0,  0};
alignas(32) const std::int64_t kMask64[8] = {-1, -1, -1, -1, 0, 0, 0, 0};

struct F32 {
  using T = float;
  using V = __m256;
  static constexpr std::size_t W = 8;
  static V load(const T* p) { return _mm256_loadu_ps(p); }
  static void store(T* p, V v) { _mm256_storeu_ps(p, v); }
  static __m256i mask(std::size_t r) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kMask32 + 8 - r));
  }
  static V mload(const T* p, __m256i m) { return _mm256_maskload_ps(p, m); }
  static void mstore(T* p, __m256i m, V v) { _mm256_maskstore_ps(p, m, v); }
  static V set1(T x) { return _mm256_set1_ps(x); }
  static V zero() { return _mm256_setzero_ps(); }
  static V fmadd(V a, V b, V c) { return _mm256_fmadd_ps(a, b, c); }
  static V add(V a, V b) { return _mm256_add_ps(a, b); }
  static V sub(V a, V b) { return _mm256_sub_ps(a, b); }
  static V mul(V a, V b) { return _mm256_mul_ps(a, b); }
  static V div(V a, V b) { return _mm256_div_ps(a, b); }
  static V sqrt(V a) { return _mm256_sqrt_ps(a); }
  static V max(V a, V b) { return _mm256_max_ps(a, b); }
  static V min(V a, V b) { return _mm256_min_ps(a, b); }
  static V gt_mask_and(V x, V a, V b) { return _mm256_and_ps(x, _mm256_cmp_ps(a, b, _CMP_GT_OQ)); }
  static T hsum(V v) {
    __m128 lo = _mm256_castps256_ps128(v);
    __m128 hi = _mm256_extractf128_ps(v, 1);
    lo = _mm_add_ps(lo, hi);
    __m128 sh = _mm_movehdup_ps(lo);
    lo = _mm_add_ps(lo, sh);
    sh = _mm_movehl_ps(sh, lo);
    lo = _mm_add_ss(lo, sh);
    return _mm_cvtss_f32(lo);
  }
};

struct F64 {
  using T = double;
  using V = __m256d;
  static constexpr std::size_t W = 4;
  static V load(const T* p) { return _mm256_loadu_pd(p); }
  static void store(T* p, V v) { _mm256_storeu_pd(p, v); }
  static __m256i mask(std::size_t r) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i*>(kMask64 + 4 - r));
  }
  static V mload(const T* p, __m256i m) { return _mm256_maskload_pd(p, m); }
  static void mstore(T* p, __m256i m, V v) { _mm256_maskstore_pd(p, m, v); }
  static V set1(T x) { return _mm256_set1_pd(x); }
  static V zero() { return _mm256_setzero_pd(); }
  static V fmadd(V a, V b, V c) { return _mm256_fmadd_pd(a, b, c); }
  static V add(V a, V b) { return _mm256_add_pd(a, b); }
  static V sub(V a, V b) { return _mm256_sub_pd(a, b); }
  static V mul(V a, V b) { return _mm256_mul_pd(a, b); }
  static V div(V a, V b) { return _mm256_div_pd(a, b); }
  static V sqrt(V a) { return _mm256_sqrt_pd(a); }
  static V max(V a, V b) { return _mm256_max_pd(a, b); }
  static V min(V a, V b) { return _mm256_min_pd(a, b); }
  static V gt_mask_and(V x, V a, V b) { return _mm256_and_pd(x, _mm256_cmp_pd(a, b, _CMP_GT_OQ)); }
  static T hsum(V v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d h = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, h));
  }
};

// Register tile of MR rows by two vectors of columns.
template <class S, std::size_t MR>
inline void tile_2v(std::size_t k, const typename S::T* a, std::size_t a_rs, std::size_t a_cs,
                    const typename S::T* b, std::size_t ldb, typename S::T* c, std::size_t ldc,
                    bool accumulate) {
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  V acc0[MR];
  V acc1[MR];
  for (std::size_t r = 0; r < MR; ++r) {
    acc0[r] = accumulate ? S::load(c + r * ldc) : S::zero();
    acc1[r] = accumulate ? S::load(c + r * ldc + W) : S::zero();
  }
  for (std::size_t p = 0; p < k; ++p) {
    const V b0 = S::load(b + p * ldb);
    const V b1 = S::load(b + p * ldb + W);
    const typename S::T* ap = a + p * a_cs;
    for (std::size_t r = 0; r < MR; ++r) {
      const V ar = S::set1(ap[r * a_rs]);
      acc0[r] = S::fmadd(ar, b0, acc0[r]);
      acc1[r] = S::fmadd(ar, b1, acc1[r]);
    }
  }
  for (std::size_t r = 0; r < MR; ++r) {
    S::store(c + r * ldc, acc0[r]);
    S::store(c + r * ldc + W, acc1[r]);
  }
}

template <class S, std::size_t MR>
inline void tile_1v(std::size_t k, const typename S::T* a, std::size_t a_rs, std::size_t a_cs,
                    const typename S::T* b, std::size_t ldb, typename S::T* c, std::size_t ldc,
                    bool accumulate) {
  using V = typename S::V;
  V acc[MR];
  for (std::size_t r = 0; r < MR; ++r) acc[r] = accumulate ? S::load(c + r * ldc) : S::zero();
  for (std::size_t p = 0; p < k; ++p) {
    const V b0 = S::load(b + p * ldb);
    const typename S::T* ap = a + p * a_cs;
    for (std::size_t r = 0; r < MR; ++r) acc[r] = S::fmadd(S::set1(ap[r * a_rs]), b0, acc[r]);
  }
  for (std::size_t r = 0; r < MR; ++r) S::store(c + r * ldc, acc[r]);
}

template <class S, std::size_t MR>
inline void tile_masked(std::size_t k, std::size_t cols, const typename S::T* a, std::size_t a_rs,
                        std::size_t a_cs, const typename S::T* b, std::size_t ldb,
                        typename S::T* c, std::size_t ldc, bool accumulate) {
  using V = typename S::V;
  const __m256i m = S::mask(cols);
  V acc[MR];
  for (std::size_t r = 0; r < MR; ++r) acc[r] = accumulate ? S::mload(c + r * ldc, m) : S::zero();
  for (std::size_t p = 0; p < k; ++p) {
    const V b0 = S::mload(b + p * ldb, m);
    const typename S::T* ap = a + p * a_cs;
    for (std::size_t r = 0; r < MR; ++r) acc[r] = S::fmadd(S::set1(ap[r * a_rs]), b0, acc[r]);
  }
  for (std::size_t r = 0; r < MR; ++r) S::mstore(c + r * ldc, m, acc[r]);
}

template <class S>
void gemm(std::size_t m, std::size_t n, std::size_t k, const typename S::T* a, std::size_t a_rs,
          std::size_t a_cs, const typename S::T* b, std::size_t ldb, typename S::T* c,
          std::size_t ldc, bool accumulate) {
  constexpr std::size_t W = S::W;
  constexpr std::size_t MR = 6;
  std::size_t j = 0;
  for (; j + 2 * W <= n; j += 2 * W) {
    std::size_t i = 0;
    for (; i + MR <= m; i += MR)
      tile_2v<S, MR>(k, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc, accumulate);
    for (; i < m; ++i)
      tile_2v<S, 1>(k, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc, accumulate);
  }
  for (; j + W <= n; j += W) {
    std::size_t i = 0;
    for (; i + MR <= m; i += MR)
      tile_1v<S, MR>(k, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc, accumulate);
    for (; i < m; ++i)
      tile_1v<S, 1>(k, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc, accumulate);
  }
  if (j < n) {
    const std::size_t cols = n - j;
    std::size_t i = 0;
    for (; i + MR <= m; i += MR)
      tile_masked<S, MR>(k, cols, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc,
                         accumulate);
    for (; i < m; ++i)
      tile_masked<S, 1>(k, cols, a + i * a_rs, a_rs, a_cs, b + j, ldb, c + i * ldc + j, ldc,
                        accumulate);
  }
}

// MR rows of A against NR rows of B, one vector accumulator per output.
template <class S, std::size_t MR, std::size_t NR>
inline void dot_tile(std::size_t k, std::size_t k_main, __m256i tail_mask, const typename S::T* a,
                     const typename S::T* b, typename S::T* c, std::size_t ldc, bool accumulate) {
  using T = typename S::T;
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  V acc[MR][NR];
  for (std::size_t r = 0; r < MR; ++r)
    for (std::size_t q = 0; q < NR; ++q) acc[r][q] = S::zero();
  for (std::size_t p = 0; p < k_main; p += W) {
    V bv[NR];
    for (std::size_t q = 0; q < NR; ++q) bv[q] = S::load(b + q * k + p);
    for (std::size_t r = 0; r < MR; ++r) {
      const V av = S::load(a + r * k + p);
      for (std::size_t q = 0; q < NR; ++q) acc[r][q] = S::fmadd(av, bv[q], acc[r][q]);
    }
  }
  if (k_main < k) {
    V bv[NR];
    for (std::size_t q = 0; q < NR; ++q) bv[q] = S::mload(b + q * k + k_main, tail_mask);
    for (std::size_t r = 0; r < MR; ++r) {
      const V av = S::mload(a + r * k + k_main, tail_mask);
      for (std::size_t q = 0; q < NR; ++q) acc[r][q] = S::fmadd(av, bv[q], acc[r][q]);
    }
  }
  for (std::size_t r = 0; r < MR; ++r)
    for (std::size_t q = 0; q < NR; ++q) {
      const T v = S::hsum(acc[r][q]);
      T& out = c[r * ldc + q];
      out = accumulate ? out + v : v;
    }
}

template <class S, std::size_t MR>
inline void dot_rows(std::size_t n, std::size_t k, std::size_t k_main, __m256i tail_mask,
                     const typename S::T* a, const typename S::T* b, typename S::T* c,
                     bool accumulate) {
  constexpr std::size_t NR = MR >= 3 ? 3 : 4;
  std::size_t j = 0;
  for (; j + NR <= n; j += NR)
    dot_tile<S, MR, NR>(k, k_main, tail_mask, a, b + j * k, c + j, n, accumulate);
  for (; j < n; ++j) dot_tile<S, MR, 1>(k, k_main, tail_mask, a, b + j * k, c + j, n, accumulate);
}

template <class S>
void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const typename S::T* a,
             const typename S::T* b, typename S::T* c, bool accumulate) {
  constexpr std::size_t W = S::W;
  const std::size_t k_main = k - k % W;
  const __m256i tail_mask = S::mask(k == k_main ? W : k - k_main);
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) dot_rows<S, 4>(n, k, k_main, tail_mask, a + i * k, b, c + i * n, accumulate);
  switch (m - i) {
    case 3: dot_rows<S, 3>(n, k, k_main, tail_mask, a + i * k, b, c + i * n, accumulate); break;
    case 2: dot_rows<S, 2>(n, k, k_main, tail_mask, a + i * k, b, c + i * n, accumulate); break;
    case 1: dot_rows<S, 1>(n, k, k_main, tail_mask, a + i * k, b, c + i * n, accumulate); break;
    default: break;
  }
}

// 8x8 (float) or 4x4 (double) register transposes over the interior, plain
// copies at the ragged edges.
inline void transpose_block(const float* src, std::size_t ld_src, float* dst, std::size_t ld_dst) {
  __m256 r[8], t[8];
  for (int i = 0; i < 8; ++i) r[i] = _mm256_loadu_ps(src + i * ld_src);
  for (int i = 0; i < 8; i += 2) {
    t[i] = _mm256_unpacklo_ps(r[i], r[i + 1]);
    t[i + 1] = _mm256_unpackhi_ps(r[i], r[i + 1]);
  }
  for (int i = 0; i < 8; i += 4) {
    r[i] = _mm256_shuffle_ps(t[i], t[i + 2], _MM_SHUFFLE(1, 0, 1, 0));
    r[i + 1] = _mm256_shuffle_ps(t[i], t[i + 2], _MM_SHUFFLE(3, 2, 3, 2));
    r[i + 2] = _mm256_shuffle_ps(t[i + 1], t[i + 3], _MM_SHUFFLE(1, 0, 1, 0));
    r[i + 3] = _mm256_shuffle_ps(t[i + 1], t[i + 3], _MM_SHUFFLE(3, 2, 3, 2));
  }
  for (int i = 0; i < 4; ++i) {
    t[i] = _mm256_permute2f128_ps(r[i], r[i + 4], 0x20);
    t[i + 4] = _mm256_permute2f128_ps(r[i], r[i + 4], 0x31);
  }
  for (int i = 0; i < 8; ++i) _mm256_storeu_ps(dst + i * ld_dst, t[i]);
}

inline void transpose_block(const double* src, std::size_t ld_src, double* dst,
                            std::size_t ld_dst) {
  __m256d r0 = _mm256_loadu_pd(src), r1 = _mm256_loadu_pd(src + ld_src),
          r2 = _mm256_loadu_pd(src + 2 * ld_src), r3 = _mm256_loadu_pd(src + 3 * ld_src);
  const __m256d t0 = _mm256_unpacklo_pd(r0, r1), t1 = _mm256_unpackhi_pd(r0, r1),
                t2 = _mm256_unpacklo_pd(r2, r3), t3 = _mm256_unpackhi_pd(r2, r3);
  _mm256_storeu_pd(dst, _mm256_permute2f128_pd(t0, t2, 0x20));
  _mm256_storeu_pd(dst + ld_dst, _mm256_permute2f128_pd(t1, t3, 0x20));
  _mm256_storeu_pd(dst + 2 * ld_dst, _mm256_permute2f128_pd(t0, t2, 0x31));
  _mm256_storeu_pd(dst + 3 * ld_dst, _mm256_permute2f128_pd(t1, t3, 0x31));
}

template <class S>
void transpose(const typename S::T* src, std::size_t rows, std::size_t cols, typename S::T* dst) {
  constexpr std::size_t W = S::W;
  const std::size_t rows_main = rows - rows % W;
  const std::size_t cols_main = cols - cols % W;
  for (std::size_t r = 0; r < rows_main; r += W)
    for (std::size_t c = 0; c < cols_main; c += W)
      transpose_block(src + r * cols + c, cols, dst + c * rows + r, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t c0 = r < rows_main ? cols_main : 0;
    for (std::size_t c = c0; c < cols; ++c) dst[c * rows + r] = src[r * cols + c];
  }
}

template <class S>
void bias_activation(typename S::T* y, std::size_t m, std::size_t n, const typename S::T* bias,
                     bool relu) {
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  const V zero = S::zero();
  const std::size_t n_main = n - n % W;
  const std::size_t tail = n - n_main;
  const __m256i tm = S::mask(tail == 0 ? W : tail);
  for (std::size_t i = 0; i < m; ++i) {
    typename S::T* row = y + i * n;
    for (std::size_t j = 0; j < n_main; j += W) {
      V v = S::add(S::load(row + j), S::load(bias + j));
      if (relu) v = S::max(v, zero);
      S::store(row + j, v);
    }
    if (tail != 0) {
      V v = S::add(S::mload(row + n_main, tm), S::mload(bias + n_main, tm));
      if (relu) v = S::max(v, zero);
      S::mstore(row + n_main, tm, v);
    }
  }
}

template <class S>
void relu_backward(typename S::T* grad, const typename S::T* act, std::size_t count) {
  constexpr std::size_t W = S::W;
  const typename S::V zero = S::zero();
  std::size_t i = 0;
  for (; i + W <= count; i += W) S::store(grad + i, S::gt_mask_and(S::load(grad + i), S::load(act + i), zero));
  for (; i < count; ++i) {
    if (!(act[i] > 0)) grad[i] = 0;
  }
}

template <class S>
void column_sum_accumulate(const typename S::T* x, std::size_t m, std::size_t n,
                           typename S::T* out) {
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  std::size_t j = 0;
  for (; j + W <= n; j += W) {
    V acc = S::load(out + j);
    for (std::size_t i = 0; i < m; ++i) acc = S::add(acc, S::load(x + i * n + j));
    S::store(out + j, acc);
  }
  for (; j < n; ++j) {
    typename S::T acc = out[j];
    for (std::size_t i = 0; i < m; ++i) acc += x[i * n + j];
    out[j] = acc;
  }
}

template <class S>
void adam(typename S::T* params, const typename S::T* grads, typename S::T* m1, typename S::T* m2,
          std::size_t count, typename S::T lr, typename S::T beta1, typename S::T beta2,
          typename S::T bc1, typename S::T bc2, typename S::T eps) {
  using T = typename S::T;
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  const T omb1 = T(1) - beta1;
  const T omb2 = T(1) - beta2;
  const V vb1 = S::set1(beta1), vb2 = S::set1(beta2), vomb1 = S::set1(omb1),
          vomb2 = S::set1(omb2), vbc1 = S::set1(bc1), vbc2 = S::set1(bc2), vlr = S::set1(lr),
          veps = S::set1(eps);
  std::size_t i = 0;
  for (; i + W <= count; i += W) {
    const V g = S::load(grads + i);
    const V m = S::add(S::mul(vb1, S::load(m1 + i)), S::mul(vomb1, g));
    const V v = S::add(S::mul(vb2, S::load(m2 + i)), S::mul(vomb2, S::mul(g, g)));
    S::store(m1 + i, m);
    S::store(m2 + i, v);
    const V m_hat = S::div(m, vbc1);
    const V v_hat = S::div(v, vbc2);
    const V step = S::div(S::mul(vlr, m_hat), S::add(S::sqrt(v_hat), veps));
    S::store(params + i, S::sub(S::load(params + i), step));
  }
  for (; i < count; ++i) {
    const T g = grads[i];
    const T m = beta1 * m1[i] + omb1 * g;
    const T v = beta2 * m2[i] + omb2 * (g * g);
    m1[i] = m;
    m2[i] = v;
    const T m_hat = m / bc1;
    const T v_hat = v / bc2;
    // Scalar sqrt here would pull in libm inline wrappers; use the vector
    // unit on one lane instead.
    const T root = S::hsum(S::sqrt(S::mload(&v_hat, S::mask(1))));
    params[i] = params[i] - lr * m_hat / (root + eps);
  }
}

template <class S>
void polyak(typename S::T* target, const typename S::T* online, std::size_t count,
            typename S::T tau) {
  using T = typename S::T;
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  const T keep = T(1) - tau;
  const V vkeep = S::set1(keep), vtau = S::set1(tau);
  std::size_t i = 0;
  for (; i + W <= count; i += W)
    S::store(target + i, S::add(S::mul(vkeep, S::load(target + i)), S::mul(vtau, S::load(online + i))));
  for (; i < count; ++i) target[i] = keep * target[i] + tau * online[i];
}

template <class S>
void clip(typename S::T* values, std::size_t count, typename S::T limit) {
  using T = typename S::T;
  using V = typename S::V;
  constexpr std::size_t W = S::W;
  const V hi = S::set1(limit), lo = S::set1(-limit);
  std::size_t i = 0;
  // max(lo, v) / min(hi, v) return v when v is NaN, matching the reference.
  for (; i + W <= count; i += W) S::store(values + i, S::min(hi, S::max(lo, S::load(values + i))));
  for (; i < count; ++i) {
    T v = values[i];
    v = v < -limit ? -limit : v;
    v = v > limit ? limit : v;
    values[i] = v;
  }
}

template <class S>
constexpr Ops<typename S::T> make_ops() {
  return Ops<typename S::T>{&gemm<S>,   &gemm_nt<S>, &transpose<S>, &bias_activation<S>, &relu_backward<S>,
                            &column_sum_accumulate<S>, &adam<S>, &polyak<S>, &clip<S>};
}

}  // namespace

const Ops<float> avx2_f32 = make_ops<F32>();
const Ops<double> avx2_f64 = make_ops<F64>();

}  // namespace see::kernels::detail
