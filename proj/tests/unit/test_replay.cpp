#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>

#include "see/errors.hpp"
#include "see/replay/replay.hpp"

using namespace see;
using namespace see::replay;

namespace {

Transition make_transition(float id, std::size_t obs_dim = 2) {
  Transition t;
  t.state.assign(obs_dim, id);
  t.action = static_cast<std::size_t>(id) % 3;
  t.reward = id * 0.5f;
  t.next_state.assign(obs_dim, id + 0.25f);
  t.terminated = static_cast<int>(id) % 2 == 0;
  t.truncated = static_cast<int>(id) % 5 == 0 && !t.terminated;
  return t;
}

std::filesystem::path temp_dir() {
  const char* env = std::getenv("SEE_TEST_TMP");
  auto dir = std::filesystem::path(env ? env : std::filesystem::temp_directory_path().string()) / "replay";
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(TransitionBuffer, PushToEmpty) {
  TransitionBuffer buf(10, 2, 1);
  buf.push(make_transition(1));
  EXPECT_EQ(buf.size(), 1u);
  EXPECT_EQ(buf.at(0), make_transition(1));
}

TEST(TransitionBuffer, FifoEviction) {
  TransitionBuffer buf(2, 2, 1);
  for (int i = 1; i <= 3; ++i) buf.push(make_transition(static_cast<float>(i)));
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(buf.at(0), make_transition(2));
  EXPECT_EQ(buf.at(1), make_transition(3));
}

TEST(TransitionBuffer, FifoSequenceOverManyWraps) {
  TransitionBuffer buf(7, 3, 1);
  for (int i = 0; i < 50; ++i) {
    buf.push(make_transition(static_cast<float>(i), 3));
    const std::size_t expected = std::min<std::size_t>(static_cast<std::size_t>(i) + 1, 7);
    ASSERT_EQ(buf.size(), expected);
    for (std::size_t k = 0; k < expected; ++k)
      ASSERT_EQ(buf.at(k), make_transition(static_cast<float>(i + 1 - expected + k), 3));
  }
}

TEST(TransitionBuffer, SingleElementSampling) {
  TransitionBuffer buf(10, 2, 1);
  buf.push(make_transition(4));
  const auto one = buf.sample(1);
  EXPECT_EQ(one.at(0), make_transition(4));
  const auto four = buf.sample(4);
  ASSERT_EQ(four.size, 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(four.at(i), make_transition(4));
}

TEST(TransitionBuffer, EmptySampleIsUsageError) {
  TransitionBuffer buf(10, 2, 1);
  EXPECT_THROW(buf.sample(1), UsageError);
}

TEST(TransitionBuffer, WrongDimensionRejected) {
  TransitionBuffer buf(10, 2, 1);
  EXPECT_THROW(buf.push(make_transition(1, 3)), ConfigError);
}

TEST(TransitionBuffer, DeterministicGivenSeed) {
  TransitionBuffer a(100, 2, 77), b(100, 2, 77), c(100, 2, 78);
  for (int i = 0; i < 60; ++i) {
    a.push(make_transition(static_cast<float>(i)));
    b.push(make_transition(static_cast<float>(i)));
    c.push(make_transition(static_cast<float>(i)));
  }
  bool any_diff = false;
  for (int round = 0; round < 5; ++round) {
    const auto x = a.sample(16), y = b.sample(16), z = c.sample(16);
    EXPECT_EQ(x.states, y.states);
    EXPECT_EQ(x.actions, y.actions);
    any_diff |= x.states != z.states;
  }
  EXPECT_TRUE(any_diff);
}

TEST(TransitionBuffer, UniformFrequenciesWithinThreeSigma) {
  TransitionBuffer buf(4, 1, 2024);
  for (int i = 0; i < 4; ++i) buf.push(make_transition(static_cast<float>(i), 1));
  constexpr std::size_t kDraws = 100000;
  std::map<float, std::size_t> counts;
  TransitionBatch batch;
  for (std::size_t d = 0; d < kDraws / 100; ++d) {
    buf.sample_into(100, batch);
    for (std::size_t i = 0; i < batch.size; ++i) ++counts[batch.states[i]];
  }
  const double sigma = std::sqrt(kDraws * 0.25 * 0.75);
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [id, n] : counts)
    EXPECT_LE(std::abs(static_cast<double>(n) - kDraws * 0.25), 3.0 * sigma) << id;
}

TEST(TransitionBuffer, SamplingDoesNotMutateContents) {
  TransitionBuffer buf(5, 2, 3);
  for (int i = 0; i < 5; ++i) buf.push(make_transition(static_cast<float>(i)));
  std::vector<Transition> before;
  for (std::size_t i = 0; i < 5; ++i) before.push_back(buf.at(i));
  for (int r = 0; r < 20; ++r) buf.sample(32);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(buf.at(i), before[i]);
}

TEST(TransitionBuffer, SaveLoadRoundTrip) {
  TransitionBuffer buf(5, 2, 3);
  for (int i = 0; i < 8; ++i) buf.push(make_transition(static_cast<float>(i)));
  const auto path = temp_dir() / "buffer.bin";
  buf.save(path);
  const auto loaded = TransitionBuffer::load(path, 3);
  ASSERT_EQ(loaded.size(), buf.size());
  EXPECT_EQ(loaded.capacity(), 5u);
  for (std::size_t i = 0; i < buf.size(); ++i) EXPECT_EQ(loaded.at(i), buf.at(i));
}

TEST(TransitionBatch, FromAndAtRoundTrip) {
  std::vector<Transition> ts{make_transition(1), make_transition(2), make_transition(5)};
  const auto batch = TransitionBatch::from(ts);
  ASSERT_EQ(batch.size, 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(batch.at(i), ts[i]);
}

fncore::ParameterVector<float> params_of(float v) {
  return fncore::ParameterVector<float>(std::vector<float>{v, v + 1, v + 2});
}

TEST(ParameterBuffer, SnapshotIsolation) {
  ParameterBuffer buf(2, 1);
  auto live = params_of(1);
  buf.push(live);
  live[0] = 99.0f;
  live.values().push_back(4.0f);
  EXPECT_EQ(*buf.at(0), params_of(1));
}

TEST(ParameterBuffer, CapacityTwoKeepsNewest) {
  ParameterBuffer buf(2, 1);
  for (int i = 1; i <= 3; ++i) buf.push(params_of(static_cast<float>(i)));
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(*buf.at(0), params_of(2));
  EXPECT_EQ(*buf.at(1), params_of(3));
}

TEST(ParameterBuffer, IdenticalSnapshotsBothRetained) {
  ParameterBuffer buf(4, 1);
  buf.push(params_of(1));
  buf.push(params_of(1));
  ASSERT_EQ(buf.size(), 2u);
  EXPECT_EQ(*buf.at(0), *buf.at(1));
  EXPECT_NE(buf.at(0).get(), buf.at(1).get());
}

TEST(ParameterBuffer, BatchLargerThanSize) {
  ParameterBuffer buf(2, 5);
  buf.push(params_of(1));
  buf.push(params_of(2));
  const auto draws = buf.sample(32);
  ASSERT_EQ(draws.size(), 32u);
  std::size_t first = 0;
  for (const auto& d : draws) {
    ASSERT_TRUE(d.get() == buf.at(0).get() || d.get() == buf.at(1).get());
    first += d.get() == buf.at(0).get();
  }
  EXPECT_GT(first, 0u);
  EXPECT_LT(first, 32u);
}

TEST(ParameterBuffer, SingleSnapshotAndEmpty) {
  ParameterBuffer buf(2, 5);
  EXPECT_THROW(buf.sample(1), UsageError);
  buf.push(params_of(7));
  const auto one = buf.sample(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(*one[0], params_of(7));
}

TEST(ParameterBuffer, DeterministicGivenSeed) {
  ParameterBuffer a(3, 11), b(3, 11);
  for (int i = 0; i < 3; ++i) {
    a.push(params_of(static_cast<float>(i)));
    b.push(params_of(static_cast<float>(i)));
  }
  for (int r = 0; r < 10; ++r) {
    const auto x = a.sample(8), y = b.sample(8);
    for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(*x[i], *y[i]);
  }
}

TEST(ParameterBuffer, FifoSequence) {
  ParameterBuffer buf(3, 1);
  for (int i = 0; i < 20; ++i) {
    buf.push(params_of(static_cast<float>(i)));
    const std::size_t n = std::min(static_cast<std::size_t>(i) + 1, std::size_t{3});
    for (std::size_t k = 0; k < n; ++k)
      ASSERT_EQ(*buf.at(k), params_of(static_cast<float>(i + 1 - n + k)));
  }
}

}  // namespace
