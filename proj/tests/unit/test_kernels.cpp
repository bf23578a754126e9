#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "see/errors.hpp"
#include "see/kernels/kernels.hpp"

using namespace see;
using kernels::Isa;

namespace {

template <class T>
std::vector<T> random_vec(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(d(rng));
  return v;
}

bool have_avx2() { return kernels::isa_supported(Isa::avx2); }

template <class T>
double tol();
template <>
double tol<float>() { return 2e-5; }
template <>
double tol<double>() { return 1e-12; }

// |x - y| <= tol * (sum of |a_ip * b_pj| magnitudes), which bounds reordering error.
template <class T>
void expect_close_gemm(const std::vector<T>& got, const std::vector<T>& want,
                       const std::vector<double>& magnitude) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    ASSERT_LE(std::abs(double(got[i]) - double(want[i])), tol<T>() * (magnitude[i] + 1e-30))
        << "index " << i;
}

template <class T>
class KernelEquivalence : public ::testing::Test {};
using Types = ::testing::Types<float, double>;
TYPED_TEST_SUITE(KernelEquivalence, Types);

TYPED_TEST(KernelEquivalence, GemmMatchesScalarOverRandomShapes) {
  using T = TypeParam;
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this machine";
  const auto& ref = kernels::ops_for<T>(Isa::scalar);
  const auto& simd = kernels::ops_for<T>(Isa::avx2);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> dim(1, 40);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng), k = dim(rng);
    const bool transposed = trial % 2 == 1;
    const bool accumulate = trial % 3 == 0;
    const auto a = random_vec<T>(rng, m * k);
    const auto b = random_vec<T>(rng, k * n);
    const std::size_t a_rs = transposed ? 1 : k;
    const std::size_t a_cs = transposed ? m : 1;
    auto c_ref = random_vec<T>(rng, m * n);
    auto c_simd = c_ref;
    std::vector<double> mag(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = accumulate ? std::abs(double(c_ref[i * n + j])) : 0.0;
        for (std::size_t p = 0; p < k; ++p)
          s += std::abs(double(a[i * a_rs + p * a_cs]) * double(b[p * n + j]));
        mag[i * n + j] = s;
      }
    ref.gemm(m, n, k, a.data(), a_rs, a_cs, b.data(), n, c_ref.data(), n, accumulate);
    simd.gemm(m, n, k, a.data(), a_rs, a_cs, b.data(), n, c_simd.data(), n, accumulate);
    expect_close_gemm(c_simd, c_ref, mag);
  }
}

TYPED_TEST(KernelEquivalence, GemmNtMatchesScalarOverRandomShapes) {
  using T = TypeParam;
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this machine";
  const auto& ref = kernels::ops_for<T>(Isa::scalar);
  const auto& simd = kernels::ops_for<T>(Isa::avx2);
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<std::size_t> dim(1, 37);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng), k = dim(rng);
    const bool accumulate = trial % 2 == 0;
    const auto a = random_vec<T>(rng, m * k);
    const auto b = random_vec<T>(rng, n * k);
    auto c_ref = random_vec<T>(rng, m * n);
    auto c_simd = c_ref;
    std::vector<double> mag(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = accumulate ? std::abs(double(c_ref[i * n + j])) : 0.0;
        for (std::size_t p = 0; p < k; ++p) s += std::abs(double(a[i * k + p]) * double(b[j * k + p]));
        mag[i * n + j] = s;
      }
    ref.gemm_nt(m, n, k, a.data(), b.data(), c_ref.data(), accumulate);
    simd.gemm_nt(m, n, k, a.data(), b.data(), c_simd.data(), accumulate);
    expect_close_gemm(c_simd, c_ref, mag);
  }
}

TYPED_TEST(KernelEquivalence, ElementwiseKernelsAreBitIdentical) {
  using T = TypeParam;
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this machine";
  const auto& ref = kernels::ops_for<T>(Isa::scalar);
  const auto& simd = kernels::ops_for<T>(Isa::avx2);
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<std::size_t> dim(1, 70);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = dim(rng), n = dim(rng);
    const std::size_t count = m * n;

    auto y1 = random_vec<T>(rng, count);
    auto y2 = y1;
    const auto bias = random_vec<T>(rng, n);
    const bool relu = trial % 2 == 0;
    ref.bias_activation(y1.data(), m, n, bias.data(), relu);
    simd.bias_activation(y2.data(), m, n, bias.data(), relu);
    ASSERT_EQ(y1, y2);

    auto g1 = random_vec<T>(rng, count);
    auto g2 = g1;
    const auto act = random_vec<T>(rng, count);
    ref.relu_backward(g1.data(), act.data(), count);
    simd.relu_backward(g2.data(), act.data(), count);
    ASSERT_EQ(g1, g2);

    auto s1 = random_vec<T>(rng, n);
    auto s2 = s1;
    ref.column_sum_accumulate(y1.data(), m, n, s1.data());
    simd.column_sum_accumulate(y1.data(), m, n, s2.data());
    ASSERT_EQ(s1, s2);

    std::vector<T> t1(count), t2(count);
    ref.transpose(y1.data(), m, n, t1.data());
    simd.transpose(y1.data(), m, n, t2.data());
    ASSERT_EQ(t1, t2);

    auto p1 = random_vec<T>(rng, count);
    auto p2 = p1;
    const auto grads = random_vec<T>(rng, count);
    auto m1a = random_vec<T>(rng, count, 0.1), m1b = m1a;
    auto m2a = random_vec<T>(rng, count, 0.1);
    for (auto& v : m2a) v = std::abs(v);
    auto m2b = m2a;
    ref.adam(p1.data(), grads.data(), m1a.data(), m2a.data(), count, T(1e-3), T(0.9), T(0.999),
             T(0.19), T(0.002997), T(1e-8));
    simd.adam(p2.data(), grads.data(), m1b.data(), m2b.data(), count, T(1e-3), T(0.9), T(0.999),
              T(0.19), T(0.002997), T(1e-8));
    ASSERT_EQ(p1, p2);
    ASSERT_EQ(m1a, m1b);
    ASSERT_EQ(m2a, m2b);

    auto tg1 = random_vec<T>(rng, count);
    auto tg2 = tg1;
    ref.polyak(tg1.data(), p1.data(), count, T(0.17));
    simd.polyak(tg2.data(), p1.data(), count, T(0.17));
    ASSERT_EQ(tg1, tg2);

    auto c1 = random_vec<T>(rng, count, 20.0);
    auto c2 = c1;
    ref.clip(c1.data(), count, T(10));
    simd.clip(c2.data(), count, T(10));
    ASSERT_EQ(c1, c2);
  }
}

TEST(KernelDispatch, ScalarAlwaysSupportedAndSelectable) {
  EXPECT_TRUE(kernels::isa_supported(Isa::scalar));
  const Isa before = kernels::active_isa();
  kernels::set_isa(Isa::scalar);
  EXPECT_EQ(kernels::active_isa(), Isa::scalar);
  EXPECT_EQ(&kernels::ops<float>(), &kernels::ops_for<float>(Isa::scalar));
  kernels::set_isa(before);
  EXPECT_EQ(kernels::active_isa(), before);
}

TEST(KernelDispatch, BestIsaIsSupported) {
  EXPECT_TRUE(kernels::isa_supported(kernels::best_isa()));
  EXPECT_EQ(kernels::isa_name(Isa::scalar), "scalar");
  EXPECT_EQ(kernels::isa_name(Isa::avx2), "avx2");
}

TEST(KernelDispatch, TransposeRoundTrip) {
  std::mt19937_64 rng(3);
  const auto& k = kernels::ops<float>();
  for (std::size_t rows : {1u, 7u, 8u, 17u, 256u})
    for (std::size_t cols : {1u, 5u, 16u, 33u}) {
      const auto src = random_vec<float>(rng, rows * cols);
      std::vector<float> t(rows * cols), back(rows * cols);
      k.transpose(src.data(), rows, cols, t.data());
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) ASSERT_EQ(t[c * rows + r], src[r * cols + c]);
      k.transpose(t.data(), cols, rows, back.data());
      ASSERT_EQ(back, src);
    }
}

}  // namespace
