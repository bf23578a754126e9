#pragma once

#include "see/kernels/kernels.hpp"

namespace see::kernels::detail {

extern const Ops<float> scalar_f32;
extern const Ops<double> scalar_f64;

#if defined(SEE_HAVE_AVX2)
extern const Ops<float> avx2_f32;
extern const Ops<double> avx2_f64;
#endif

}  // namespace see::kernels::detail
