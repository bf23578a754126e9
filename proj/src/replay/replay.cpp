#include "see/replay/replay.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <string>

#include "see/errors.hpp"

namespace see::replay {

void TransitionBatch::resize(std::size_t count, std::size_t dim) {
  obs_dim = dim;
  size = count;
  states.resize(count * dim);
  next_states.resize(count * dim);
  actions.resize(count);
  rewards.resize(count);
  terminated.resize(count);
  truncated.resize(count);
}

void TransitionBatch::set(std::size_t i, const Transition& t) {
  if (t.state.size() != obs_dim || t.next_state.size() != obs_dim)
    throw ConfigError("TransitionBatch: observation length mismatch");
  std::copy(t.state.begin(), t.state.end(), states.begin() + i * obs_dim);
  std::copy(t.next_state.begin(), t.next_state.end(), next_states.begin() + i * obs_dim);
  actions[i] = static_cast<std::uint32_t>(t.action);
  rewards[i] = t.reward;
  terminated[i] = t.terminated ? 1 : 0;
  truncated[i] = t.truncated ? 1 : 0;
}

Transition TransitionBatch::at(std::size_t i) const {
  Transition t;
  t.state.assign(states.begin() + i * obs_dim, states.begin() + (i + 1) * obs_dim);
  t.next_state.assign(next_states.begin() + i * obs_dim, next_states.begin() + (i + 1) * obs_dim);
  t.action = actions[i];
  t.reward = rewards[i];
  t.terminated = terminated[i] != 0;
  t.truncated = truncated[i] != 0;
  return t;
}

TransitionBatch TransitionBatch::from(const std::vector<Transition>& transitions) {
  TransitionBatch batch;
  batch.resize(transitions.size(), transitions.empty() ? 0 : transitions.front().state.size());
  for (std::size_t i = 0; i < transitions.size(); ++i) batch.set(i, transitions[i]);
  return batch;
}

TransitionBuffer::TransitionBuffer(std::size_t capacity, std::size_t obs_dim, std::uint64_t seed)
    : capacity_(capacity),
      obs_dim_(obs_dim),
      states_(capacity * obs_dim),
      next_states_(capacity * obs_dim),
      actions_(capacity),
      rewards_(capacity),
      terminated_(capacity),
      truncated_(capacity),
      rng_(seed) {
  if (capacity == 0) throw ConfigError("TransitionBuffer: capacity must be positive");
  if (obs_dim == 0) throw ConfigError("TransitionBuffer: obs_dim must be positive");
}

void TransitionBuffer::push(const Transition& t) {
  if (t.state.size() != obs_dim_ || t.next_state.size() != obs_dim_)
    throw ConfigError("TransitionBuffer: observation length mismatch");
  const std::size_t s = next_;
  std::copy(t.state.begin(), t.state.end(), states_.begin() + s * obs_dim_);
  std::copy(t.next_state.begin(), t.next_state.end(), next_states_.begin() + s * obs_dim_);
  actions_[s] = static_cast<std::uint32_t>(t.action);
  rewards_[s] = t.reward;
  terminated_[s] = t.terminated ? 1 : 0;
  truncated_[s] = t.truncated ? 1 : 0;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

std::size_t TransitionBuffer::slot(std::size_t i) const noexcept {
  return (next_ + capacity_ - size_ + i) % capacity_;
}

void TransitionBuffer::copy_slot(std::size_t s, TransitionBatch& out, std::size_t row) const {
  std::memcpy(out.states.data() + row * obs_dim_, states_.data() + s * obs_dim_,
              obs_dim_ * sizeof(float));
  std::memcpy(out.next_states.data() + row * obs_dim_, next_states_.data() + s * obs_dim_,
              obs_dim_ * sizeof(float));
  out.actions[row] = actions_[s];
  out.rewards[row] = rewards_[s];
  out.terminated[row] = terminated_[s];
  out.truncated[row] = truncated_[s];
}

Transition TransitionBuffer::at(std::size_t i) const {
  if (i >= size_) throw UsageError("TransitionBuffer::at: index out of range");
  TransitionBatch one;
  one.resize(1, obs_dim_);
  copy_slot(slot(i), one, 0);
  return one.at(0);
}

TransitionBatch TransitionBuffer::sample(std::size_t batch) {
  TransitionBatch out;
  sample_into(batch, out);
  return out;
}

void TransitionBuffer::sample_into(std::size_t batch, TransitionBatch& out) {
  if (size_ == 0) throw UsageError("TransitionBuffer::sample: buffer is empty");
  if (batch == 0) throw ConfigError("TransitionBuffer::sample: batch must be positive");
  out.resize(batch, obs_dim_);
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  for (std::size_t row = 0; row < batch; ++row) copy_slot(slot(pick(rng_)), out, row);
}

namespace {

constexpr char kMagic[8] = {'S', 'E', 'E', 'R', 'E', 'P', 'L', '1'};

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw UsageError("TransitionBuffer::load: truncated file");
}

}  // namespace

void TransitionBuffer::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  put(out, static_cast<std::uint64_t>(capacity_));
  put(out, static_cast<std::uint64_t>(obs_dim_));
  put(out, static_cast<std::uint64_t>(size_));
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t s = slot(i);
    out.write(reinterpret_cast<const char*>(states_.data() + s * obs_dim_), obs_dim_ * sizeof(float));
    put(out, actions_[s]);
    put(out, rewards_[s]);
    out.write(reinterpret_cast<const char*>(next_states_.data() + s * obs_dim_),
              obs_dim_ * sizeof(float));
    put(out, terminated_[s]);
    put(out, truncated_[s]);
  }
}

TransitionBuffer TransitionBuffer::load(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw UsageError(path.string() + " is not a transition buffer dump");
  std::uint64_t capacity = 0, obs_dim = 0, size = 0;
  get(in, capacity);
  get(in, obs_dim);
  get(in, size);
  if (size > capacity) throw UsageError(path.string() + ": size exceeds capacity");
  TransitionBuffer buffer(capacity, obs_dim, seed);
  Transition t;
  t.state.resize(obs_dim);
  t.next_state.resize(obs_dim);
  for (std::uint64_t i = 0; i < size; ++i) {
    in.read(reinterpret_cast<char*>(t.state.data()), obs_dim * sizeof(float));
    std::uint32_t action = 0;
    std::uint8_t term = 0, trunc = 0;
    get(in, action);
    get(in, t.reward);
    in.read(reinterpret_cast<char*>(t.next_state.data()), obs_dim * sizeof(float));
    get(in, term);
    get(in, trunc);
    t.action = action;
    t.terminated = term != 0;
    t.truncated = trunc != 0;
    buffer.push(t);
  }
  return buffer;
}

ParameterBuffer::ParameterBuffer(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), storage_(capacity), rng_(seed) {
  if (capacity == 0) throw ConfigError("ParameterBuffer: capacity must be positive");
}

void ParameterBuffer::push(const fncore::ParameterVector<float>& params) {
  storage_[next_] = std::make_shared<const fncore::ParameterVector<float>>(params);
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
}

const ParameterSnapshot& ParameterBuffer::at(std::size_t i) const {
  if (i >= size_) throw UsageError("ParameterBuffer::at: index out of range");
  return storage_[(next_ + capacity_ - size_ + i) % capacity_];
}

std::vector<ParameterSnapshot> ParameterBuffer::sample(std::size_t batch) {
  if (size_ == 0) throw UsageError("ParameterBuffer::sample: buffer is empty");
  if (batch == 0) throw ConfigError("ParameterBuffer::sample: batch must be positive");
  std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
  std::vector<ParameterSnapshot> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i) out.push_back(at(pick(rng_)));
  return out;
}

}  // namespace see::replay
