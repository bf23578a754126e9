#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace see::fncore {

enum class Activation { relu };

/// Fully connected network shape. Hidden layers use `activation`, the output
/// layer is linear.
///
/// Parameter layout (fixed, used by snapshot files): layers in order from
/// input to output; for each layer the weight matrix [out x in] row-major,
/// followed by its bias [out].
struct MlpSpec {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden_dims;
  std::size_t output_dim = 0;
  Activation activation = Activation::relu;

  std::size_t layer_count() const noexcept { return hidden_dims.size() + 1; }
  std::size_t layer_input_dim(std::size_t layer) const;
  std::size_t layer_output_dim(std::size_t layer) const;
  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const;
  std::size_t parameter_count() const;

  /// Throws ConfigError when a dimension is zero.
  void validate() const;

  bool operator==(const MlpSpec&) const = default;
};

/// Flat network parameters in MlpSpec layout.
template <class T>
class ParameterVector {
 public:
  ParameterVector() = default;
  explicit ParameterVector(std::size_t count, T fill = T(0)) : values_(count, fill) {}
  explicit ParameterVector(std::vector<T> values) : values_(std::move(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  T* data() noexcept { return values_.data(); }
  const T* data() const noexcept { return values_.data(); }
  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<T> span() noexcept { return values_; }
  std::span<const T> span() const noexcept { return values_; }
  std::vector<T>& values() noexcept { return values_; }
  const std::vector<T>& values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  bool operator==(const ParameterVector&) const = default;

 private:
  std::vector<T> values_;
};

/// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero biases.
template <class T>
ParameterVector<T> init_parameters(const MlpSpec& spec, std::uint64_t seed);

/// Activations cached by mlp_forward for a batch of inputs. activation(0) is
/// a copy of the input, activation(l) for 0 < l < layer_count() is the ReLU
/// output of hidden layer l - 1, and output() is the linear output. ReLU
/// pre-activation signs are recoverable from the activations, which is all
/// backprop needs.
template <class T>
class ForwardTrace {
 public:
  std::size_t batch() const noexcept { return batch_; }
  const MlpSpec& spec() const noexcept { return spec_; }
  std::span<const T> activation(std::size_t layer) const { return acts_.at(layer); }
  std::span<const T> output() const { return acts_.back(); }
  bool empty() const noexcept { return acts_.empty(); }

 private:
  template <class U>
  friend void mlp_forward(const MlpSpec&, std::span<const U>, std::span<const U>, std::size_t,
                          ForwardTrace<U>&);
  template <class U>
  friend void mlp_backward(const MlpSpec&, std::span<const U>, const ForwardTrace<U>&,
                           std::span<const U>, std::span<U>, std::span<U>);

  MlpSpec spec_;
  std::size_t batch_ = 0;
  std::size_t param_count_ = 0;
  std::vector<std::vector<T>> acts_;
  std::vector<T> transposed_;  // scratch for the forward gemm
};

/// Forward pass over `batch` row-major inputs. Reuses the trace's buffers.
/// Throws ConfigError on dimension mismatch.
template <class T>
void mlp_forward(const MlpSpec& spec, std::span<const T> params, std::span<const T> inputs,
                 std::size_t batch, ForwardTrace<T>& trace);

/// Convenience overload for a single input.
template <class T>
ForwardTrace<T> mlp_forward(const MlpSpec& spec, std::span<const T> params,
                            std::span<const T> input);

/// Backprop `output_grad` [batch x output_dim] through the traced forward.
/// Parameter gradients are ADDED into `param_grad` (skipped when empty); the
/// gradient with respect to the inputs overwrites `input_grad` (skipped when
/// empty). ReLU uses subgradient 0 at the kink. Throws InternalError when the
/// trace does not match `spec`/`params`.
template <class T>
void mlp_backward(const MlpSpec& spec, std::span<const T> params, const ForwardTrace<T>& trace,
                  std::span<const T> output_grad, std::span<T> param_grad,
                  std::span<T> input_grad);

template <class T>
struct MlpGradients {
  ParameterVector<T> params;
  std::vector<T> input;
};

template <class T>
MlpGradients<T> mlp_backward(const MlpSpec& spec, std::span<const T> params,
                             const ForwardTrace<T>& trace, std::span<const T> output_grad);

}  // namespace see::fncore
