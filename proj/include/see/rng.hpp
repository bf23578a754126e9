#pragma once

#include <cstdint>
#include <random>

namespace see {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent stream seeds from a run
/// seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x5EEDULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index) noexcept {
  return mix64(derive_seed(seed, stream) ^ mix64(index));
}

/// Named streams of a training run. Values are part of the reproducibility
/// contract; do not renumber.
enum class SeedStream : std::uint64_t {
  exploit_init = 1,
  explore_init = 2,
  transition_sampling = 3,
  parameter_sampling = 4,
  action_selection = 5,
  train_env = 6,
  evaluation_env = 7,
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(stream));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, SeedStream stream,
                                    std::uint64_t index) noexcept {
  return derive_seed(seed, static_cast<std::uint64_t>(stream), index);
}

/// Uniform random bit generator that counts how many values were drawn.
class CountingRng {
 public:
  using result_type = Rng::result_type;

  explicit CountingRng(std::uint64_t seed = 0) : engine_(seed) {}

  static constexpr result_type min() { return Rng::min(); }
  static constexpr result_type max() { return Rng::max(); }

  result_type operator()() {
    ++draws_;
    return engine_();
  }

  std::uint64_t draws() const noexcept { return draws_; }

 private:
  Rng engine_;
  std::uint64_t draws_ = 0;
};

}  // namespace see
