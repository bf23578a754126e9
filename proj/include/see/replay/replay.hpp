#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "see/fncore/mlp.hpp"
#include "see/rng.hpp"

namespace see::replay {

struct Transition {
  std::vector<float> state;
  std::size_t action = 0;
  float reward = 0.0f;
  std::vector<float> next_state;
  bool terminated = false;
  bool truncated = false;

  bool operator==(const Transition&) const = default;
};

/// Structure-of-arrays batch; states are row-major [size x obs_dim].
struct TransitionBatch {
  std::size_t obs_dim = 0;
  std::size_t size = 0;
  std::vector<float> states;
  std::vector<float> next_states;
  std::vector<std::uint32_t> actions;
  std::vector<float> rewards;
  std::vector<std::uint8_t> terminated;
  std::vector<std::uint8_t> truncated;

  void resize(std::size_t count, std::size_t dim);
  void set(std::size_t i, const Transition& t);
  Transition at(std::size_t i) const;

  static TransitionBatch from(const std::vector<Transition>& transitions);
};

/// FIFO replay memory of fixed capacity with seeded uniform sampling (with
/// replacement).
class TransitionBuffer {
 public:
  TransitionBuffer(std::size_t capacity, std::size_t obs_dim, std::uint64_t seed);

  void push(const Transition& t);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t obs_dim() const noexcept { return obs_dim_; }

  /// i = 0 is the oldest stored transition.
  Transition at(std::size_t i) const;

  /// Throws UsageError when the buffer is empty.
  TransitionBatch sample(std::size_t batch);
  void sample_into(std::size_t batch, TransitionBatch& out);

  /// Flat little-endian dump: "SEEREPL1", u64 capacity, u64 obs_dim, u64 size,
  /// then `size` records oldest first: f32[obs_dim] state, u32 action,
  /// f32 reward, f32[obs_dim] next state, u8 terminated, u8 truncated.
  void save(const std::filesystem::path& path) const;
  static TransitionBuffer load(const std::filesystem::path& path, std::uint64_t seed);

 private:
  std::size_t slot(std::size_t i) const noexcept;
  void copy_slot(std::size_t slot, TransitionBatch& out, std::size_t row) const;

  std::size_t capacity_;
  std::size_t obs_dim_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<float> states_;
  std::vector<float> next_states_;
  std::vector<std::uint32_t> actions_;
  std::vector<float> rewards_;
  std::vector<std::uint8_t> terminated_;
  std::vector<std::uint8_t> truncated_;
  Rng rng_;
};

/// Frozen copy of exploitation parameters.
using ParameterSnapshot = std::shared_ptr<const fncore::ParameterVector<float>>;

/// FIFO store of parameter snapshots with seeded uniform sampling (with
/// replacement, so a batch may exceed the number stored).
class ParameterBuffer {
 public:
  ParameterBuffer(std::size_t capacity, std::uint64_t seed);

  /// Stores a deep copy of `params`.
  void push(const fncore::ParameterVector<float>& params);

  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }

  /// i = 0 is the oldest stored snapshot.
  const ParameterSnapshot& at(std::size_t i) const;

  /// Throws UsageError when the buffer is empty.
  std::vector<ParameterSnapshot> sample(std::size_t batch);

 private:
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<ParameterSnapshot> storage_;
  Rng rng_;
};

}  // namespace see::replay
