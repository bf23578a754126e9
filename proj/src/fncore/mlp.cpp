#include "see/fncore/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "see/errors.hpp"
#include "see/kernels/kernels.hpp"
#include "see/rng.hpp"

namespace see::fncore {

namespace {

// Below this batch size the forward pass uses row dot products instead of
// transposing each weight matrix for the gemm kernel.
constexpr std::size_t kDotBatchLimit = 4;

std::string dims_message(const char* what, std::size_t got, std::size_t want) {
  return std::string(what) + ": got " + std::to_string(got) + ", expected " + std::to_string(want);
}

}  // namespace

std::size_t MlpSpec::layer_input_dim(std::size_t layer) const {
  return layer == 0 ? input_dim : hidden_dims.at(layer - 1);
}

std::size_t MlpSpec::layer_output_dim(std::size_t layer) const {
  return layer == hidden_dims.size() ? output_dim : hidden_dims.at(layer);
}

std::size_t MlpSpec::weight_offset(std::size_t layer) const {
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layer; ++l)
    offset += layer_output_dim(l) * (layer_input_dim(l) + 1);
  return offset;
}

std::size_t MlpSpec::bias_offset(std::size_t layer) const {
  return weight_offset(layer) + layer_output_dim(layer) * layer_input_dim(layer);
}

std::size_t MlpSpec::parameter_count() const { return weight_offset(layer_count()); }

void MlpSpec::validate() const {
  if (input_dim == 0) throw ConfigError("MlpSpec: input_dim must be >= 1");
  if (output_dim == 0) throw ConfigError("MlpSpec: output_dim must be >= 1");
  for (std::size_t h : hidden_dims)
    if (h == 0) throw ConfigError("MlpSpec: hidden layer sizes must be >= 1");
}

template <class T>
bool ParameterVector<T>::all_finite() const noexcept {
  for (T v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

template <class T>
ParameterVector<T> init_parameters(const MlpSpec& spec, std::uint64_t seed) {
  spec.validate();
  ParameterVector<T> params(spec.parameter_count());
  Rng rng(seed);
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    const std::size_t fan_in = spec.layer_input_dim(l);
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    const std::size_t w0 = spec.weight_offset(l);
    const std::size_t count = fan_in * spec.layer_output_dim(l);
    for (std::size_t i = 0; i < count; ++i) params[w0 + i] = static_cast<T>(dist(rng));
  }
  return params;
}

template <class T>
void mlp_forward(const MlpSpec& spec, std::span<const T> params, std::span<const T> inputs,
                 std::size_t batch, ForwardTrace<T>& trace) {
  if (params.size() != spec.parameter_count())
    throw ConfigError(dims_message("mlp_forward parameter count", params.size(),
                                   spec.parameter_count()));
  if (batch == 0 || inputs.size() != batch * spec.input_dim)
    throw ConfigError(dims_message("mlp_forward input length", inputs.size(),
                                   batch * spec.input_dim));
  const auto& k = kernels::ops<T>();
  const std::size_t layers = spec.layer_count();

  if (!(trace.spec_ == spec)) trace.spec_ = spec;
  trace.batch_ = batch;
  trace.param_count_ = params.size();
  trace.acts_.resize(layers + 1);
  trace.acts_[0].assign(inputs.begin(), inputs.end());

  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = spec.layer_input_dim(l);
    const std::size_t out = spec.layer_output_dim(l);
    const T* w = params.data() + spec.weight_offset(l);
    const T* b = params.data() + spec.bias_offset(l);
    const std::vector<T>& x = trace.acts_[l];
    std::vector<T>& y = trace.acts_[l + 1];
    y.resize(batch * out);
    if (batch <= kDotBatchLimit) {
      k.gemm_nt(batch, out, in, x.data(), w, y.data(), false);
    } else {
      auto& wt = trace.transposed_;
      wt.resize(in * out);
      k.transpose(w, out, in, wt.data());
      k.gemm(batch, out, in, x.data(), in, 1, wt.data(), out, y.data(), out, false);
    }
    k.bias_activation(y.data(), batch, out, b, l + 1 < layers);
  }
}

template <class T>
ForwardTrace<T> mlp_forward(const MlpSpec& spec, std::span<const T> params,
                            std::span<const T> input) {
  ForwardTrace<T> trace;
  mlp_forward(spec, params, input, 1, trace);
  return trace;
}

template <class T>
void mlp_backward(const MlpSpec& spec, std::span<const T> params, const ForwardTrace<T>& trace,
                  std::span<const T> output_grad, std::span<T> param_grad,
                  std::span<T> input_grad) {
  if (trace.acts_.empty() || !(trace.spec_ == spec) || trace.param_count_ != params.size() ||
      trace.acts_.size() != spec.layer_count() + 1)
    throw InternalError("mlp_backward: trace was not produced by a matching forward pass");
  const std::size_t batch = trace.batch_;
  if (output_grad.size() != batch * spec.output_dim)
    throw InternalError(dims_message("mlp_backward output gradient length", output_grad.size(),
                                     batch * spec.output_dim));
  if (!param_grad.empty() && param_grad.size() != params.size())
    throw InternalError(dims_message("mlp_backward parameter gradient length", param_grad.size(),
                                     params.size()));
  if (!input_grad.empty() && input_grad.size() != batch * spec.input_dim)
    throw InternalError(dims_message("mlp_backward input gradient length", input_grad.size(),
                                     batch * spec.input_dim));

  const auto& k = kernels::ops<T>();
  const std::size_t layers = spec.layer_count();
  std::vector<T> delta(output_grad.begin(), output_grad.end());
  std::vector<T> prev;

  for (std::size_t l = layers; l-- > 0;) {
    const std::size_t in = spec.layer_input_dim(l);
    const std::size_t out = spec.layer_output_dim(l);
    const std::vector<T>& x = trace.acts_[l];
    if (!param_grad.empty()) {
      // dW[out x in] += delta^T[out x batch] * x[batch x in]
      k.gemm(out, in, batch, delta.data(), 1, out, x.data(), in,
             param_grad.data() + spec.weight_offset(l), in, true);
      k.column_sum_accumulate(delta.data(), batch, out, param_grad.data() + spec.bias_offset(l));
    }
    if (l == 0 && input_grad.empty()) break;
    // prev[batch x in] = delta[batch x out] * W[out x in]
    prev.resize(batch * in);
    k.gemm(batch, in, out, delta.data(), out, 1, params.data() + spec.weight_offset(l), in,
           prev.data(), in, false);
    if (l > 0) k.relu_backward(prev.data(), x.data(), prev.size());
    delta.swap(prev);
  }
  if (!input_grad.empty()) std::copy(delta.begin(), delta.end(), input_grad.begin());
}

template <class T>
MlpGradients<T> mlp_backward(const MlpSpec& spec, std::span<const T> params,
                             const ForwardTrace<T>& trace, std::span<const T> output_grad) {
  MlpGradients<T> grads{ParameterVector<T>(params.size()),
                        std::vector<T>(trace.batch() * spec.input_dim)};
  mlp_backward<T>(spec, params, trace, output_grad, grads.params.span(), grads.input);
  return grads;
}

#define SEE_INSTANTIATE_MLP(T)                                                                   \
  template class ParameterVector<T>;                                                             \
  template ParameterVector<T> init_parameters<T>(const MlpSpec&, std::uint64_t);                 \
  template void mlp_forward<T>(const MlpSpec&, std::span<const T>, std::span<const T>,           \
                               std::size_t, ForwardTrace<T>&);                                   \
  template ForwardTrace<T> mlp_forward<T>(const MlpSpec&, std::span<const T>,                    \
                                          std::span<const T>);                                   \
  template void mlp_backward<T>(const MlpSpec&, std::span<const T>, const ForwardTrace<T>&,      \
                                std::span<const T>, std::span<T>, std::span<T>);                 \
  template MlpGradients<T> mlp_backward<T>(const MlpSpec&, std::span<const T>,                   \
                                           const ForwardTrace<T>&, std::span<const T>);

SEE_INSTANTIATE_MLP(float)
SEE_INSTANTIATE_MLP(double)

}  // namespace see::fncore
