#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>

#include "see/agents/explore_agent.hpp"
#include "see/agents/exploration_network.hpp"
#include "see/agents/targets.hpp"
#include "see/errors.hpp"
#include "support/grad_check.hpp"
#include "support/tabular.hpp"

using namespace see;
using namespace see::agents;

namespace {

using Params = fncore::ParameterVector<float>;

ExploreConfig small_config(std::size_t obs = 3, std::size_t actions = 2, std::size_t probes = 3) {
  ExploreConfig c;
  c.obs_dim = obs;
  c.action_count = actions;
  c.probe_count = probes;
  c.exploit_hidden = {8};
  c.hidden = {16};
  c.exploit_gamma = 0.9;
  c.gamma = 0.9;
  c.learning_rate = 1e-3;
  c.tau = 0.5;
  return c;
}

// Exploitation parameters whose q-values are the same vector in every state.
Params constant_theta(const QNetwork<float>& net, float value, const std::vector<float>& adv) {
  Params p(net.parameter_count());
  const auto& spec = net.spec();
  const std::size_t head = spec.bias_offset(spec.layer_count() - 1);
  p[head] = value;
  for (std::size_t a = 0; a < adv.size(); ++a) p[head + 1 + a] = adv[a];
  return p;
}

// Zero MLP with the given output biases, so every prediction equals `out`.
void set_constant_delta(Params& omega, const ExplorationNetwork<float>& net,
                        const std::vector<float>& out) {
  const auto& spec = net.mlp_spec();
  std::fill(omega.values().begin(), omega.values().begin() + static_cast<long>(net.probe_offset()), 0.0f);
  const std::size_t head = spec.bias_offset(spec.layer_count() - 1);
  for (std::size_t a = 0; a < out.size(); ++a) omega[head + a] = out[a];
}

replay::Transition transition(std::size_t action, float reward, bool terminated, std::size_t obs = 3) {
  replay::Transition t;
  t.state.assign(obs, 0.4f);
  t.next_state.assign(obs, -0.3f);
  t.action = action;
  t.reward = reward;
  t.terminated = terminated;
  return t;
}

replay::ParameterSnapshot share(const Params& p) { return std::make_shared<const Params>(p); }

std::vector<replay::Transition> random_transitions(std::mt19937_64& rng, std::size_t n,
                                                   std::size_t obs, std::size_t actions) {
  std::normal_distribution<float> g;
  std::vector<replay::Transition> ts;
  for (std::size_t i = 0; i < n; ++i) {
    replay::Transition t;
    for (std::size_t d = 0; d < obs; ++d) {
      t.state.push_back(g(rng));
      t.next_state.push_back(g(rng));
    }
    t.action = i % actions;
    t.reward = g(rng);
    t.terminated = i % 3 == 2;
    ts.push_back(t);
  }
  return ts;
}

TEST(Fingerprint, ZeroThetaGivesZeroEmbedding) {
  ExploreAgent agent(small_config(), 1);
  const Params theta(agent.exploit_net().parameter_count());
  const auto e = agent.embed(theta.span());
  ASSERT_EQ(e.size(), 3u * 2u);
  for (float v : e) EXPECT_EQ(v, 0.0f);
}

TEST(Fingerprint, SingleProbeEqualsQValues) {
  ExploreAgent agent(small_config(3, 2, 1), 1);
  const auto theta = agent.exploit_net().init(5);
  const auto probes = agent.network().probes(agent.online().span());
  const auto q = agent.exploit_net().q_values(theta.span(), probes);
  EXPECT_EQ(agent.embed(theta.span()), q);
}

TEST(Fingerprint, ConcatenatesProbesInOrder) {
  ExploreAgent agent(small_config(3, 4, 5), 2);
  const auto theta = agent.exploit_net().init(6);
  const auto probes = agent.network().probes(agent.online().span());
  const auto e = agent.embed(theta.span());
  for (std::size_t i = 0; i < 5; ++i) {
    const auto q = agent.exploit_net().q_values(theta.span(), probes.subspan(i * 3, 3));
    for (std::size_t a = 0; a < 4; ++a) EXPECT_NEAR(e[i * 4 + a], q[a], 1e-6f);
  }
}

TEST(Fingerprint, DistinctSnapshotsDiffer) {
  ExploreAgent agent(small_config(), 3);
  const auto a = agent.exploit_net().init(1);
  const auto b = agent.exploit_net().init(2);
  ASSERT_NE(agent.exploit_net().q_values(a.span(), agent.network().probes(agent.online().span()).subspan(0, 3)),
            agent.exploit_net().q_values(b.span(), agent.network().probes(agent.online().span()).subspan(0, 3)));
  EXPECT_NE(agent.embed(a.span()), agent.embed(b.span()));
}

TEST(ProbeInit, ScaledNormalAndSeeded) {
  auto config = small_config(4, 2, 200);
  ExploreAgent a(config, 9), b(config, 9), c(config, 10);
  EXPECT_EQ(a.online(), b.online());
  EXPECT_NE(a.online(), c.online());
  const auto probes = a.network().probes(a.online().span());
  double sum = 0.0, sq = 0.0;
  for (float v : probes) {
    sum += v;
    sq += static_cast<double>(v) * v;
  }
  const double n = static_cast<double>(probes.size());
  EXPECT_NEAR(sum / n, 0.0, 0.02);
  EXPECT_NEAR(std::sqrt(sq / n), 0.1, 0.01);
}

TEST(DeltaValues, ZeroMlpGivesZero) {
  ExploreAgent agent(small_config(), 1);
  set_constant_delta(agent.online(), agent.network(), {0.0f, 0.0f});
  const auto theta = agent.exploit_net().init(3);
  const std::vector<float> s{1, 2, 3};
  for (float v : agent.delta_values(agent.embed(theta.span()), s)) EXPECT_EQ(v, 0.0f);
}

TEST(DeltaValues, DeterministicAndThetaDependent) {
  ExploreAgent agent(small_config(), 4);
  const auto a = agent.exploit_net().init(1);
  const auto b = agent.exploit_net().init(2);
  const std::vector<float> s{0.3f, -0.1f, 0.8f};
  const auto& net = agent.network();
  EXPECT_EQ(net.delta_values(agent.online().span(), s, a.span()),
            net.delta_values(agent.online().span(), s, a.span()));
  EXPECT_EQ(net.delta_values(agent.online().span(), s, a.span()),
            agent.delta_values(agent.embed(a.span()), s));
  EXPECT_NE(net.delta_values(agent.online().span(), s, a.span()),
            net.delta_values(agent.online().span(), s, b.span()));
}

TEST(ExplorationReward, Examples) {
  ExploreAgent agent(small_config(), 1);
  const auto& q = agent.exploit_net();
  // q = (0.5, 2) everywhere: Q(s, 0) = 0.5, max Q(s') = 2.
  const auto theta = constant_theta(q, 1.25f, {-0.75f, 0.75f});
  EXPECT_NEAR(agent.exploration_reward(theta.span(), transition(0, 1.0f, false)), 2.3f, 1e-6f);
  // q = (-0.7, 0.7), terminal with zero reward.
  const auto theta2 = constant_theta(q, 0.0f, {-0.7f, 0.7f});
  EXPECT_NEAR(agent.exploration_reward(theta2.span(), transition(0, 0.0f, true)), 0.7f, 1e-6f);
  // Perfect prediction of a terminal reward.
  EXPECT_EQ(agent.exploration_reward(theta2.span(), transition(1, 0.7f, true)), 0.0f);
  // Perfect prediction with bootstrap: q = (10, 10), r = 1, gamma 0.9.
  const auto theta3 = constant_theta(q, 10.0f, {0.0f, 0.0f});
  EXPECT_NEAR(agent.exploration_reward(theta3.span(), transition(1, 1.0f, false)), 0.0f, 1e-5f);
}

TEST(ExplorationReward, NonNegativeOnFuzz) {
  ExploreAgent agent(small_config(), 1);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto theta = agent.exploit_net().init(rng());
    for (const auto& t : random_transitions(rng, 3, 3, 2))
      ASSERT_GE(agent.exploration_reward(theta.span(), t), 0.0f);
  }
}

TEST(MaxTarget, Examples) {
  ExploreAgent agent(small_config(), 1);
  const auto theta = agent.exploit_net().init(1);
  set_constant_delta(agent.online(), agent.network(), {0.0f, 4.0f});
  set_constant_delta(agent.target(), agent.network(), {7.0f, 2.0f});
  EXPECT_NEAR(agent.exploration_target(transition(0, 0.0f, false), theta.span(), 1.0f), 1.8f, 1e-6f);
  EXPECT_EQ(agent.exploration_target(transition(0, 0.0f, true), theta.span(), 1.0f), 1.0f);
  EXPECT_EQ(agent.exploration_target(transition(0, 0.0f, false), theta.span(), 5.0f), 5.0f);
  set_constant_delta(agent.target(), agent.network(), {0.0f, 10.0f / 3.0f});
  EXPECT_NEAR(agent.exploration_target(transition(0, 0.0f, false), theta.span(), 2.0f), 3.0f, 1e-6f);
}

TEST(MaxTarget, SumVariantAddsBootstrap) {
  auto config = small_config();
  config.max_update = false;
  ExploreAgent agent(config, 1);
  const auto theta = agent.exploit_net().init(1);
  set_constant_delta(agent.online(), agent.network(), {0.0f, 4.0f});
  set_constant_delta(agent.target(), agent.network(), {7.0f, 2.0f});
  EXPECT_NEAR(agent.exploration_target(transition(0, 0.0f, false), theta.span(), 1.0f), 2.8f, 1e-6f);
}

TEST(MaxTarget, BoundsHoldOnFuzz) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0.0, 3.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> on(1 + trial % 5), tg(on.size());
    for (auto& v : on) v = g(rng);
    for (auto& v : tg) v = g(rng);
    const double r = std::abs(g(rng));
    const double gamma = u(rng);
    const double y = exploration_target<double>(r, gamma, false, on, tg, true);
    ASSERT_GE(y, r);
    ASSERT_GE(y, gamma * tg[argmax<double>(on)]);
    ASSERT_TRUE(y == r || y == gamma * tg[argmax<double>(on)]);
    ASSERT_EQ(exploration_target<double>(r, gamma, true, on, tg, true), r);
  }
}

// Mean over the cross product, evaluated pair by pair with the public
// single-transition operations.
double cross_product_loss(const ExploreAgent& agent, const std::vector<replay::Transition>& ts,
                          const std::vector<replay::ParameterSnapshot>& snaps) {
  double loss = 0.0;
  for (const auto& t : ts)
    for (const auto& s : snaps) {
      const float r = agent.exploration_reward(s->span(), t);
      const float y = agent.exploration_target(t, s->span(), r);
      const float pred = agent.network().delta_values(agent.online().span(), t.state, s->span())[t.action];
      loss += (static_cast<double>(pred) - y) * (static_cast<double>(pred) - y);
    }
  return loss / static_cast<double>(ts.size() * snaps.size());
}

TEST(ExploreUpdate, FourByThirtyTwoCrossProduct) {
  ExploreAgent agent(small_config(), 5);
  std::mt19937_64 rng(1);
  const auto ts = random_transitions(rng, 4, 3, 2);
  std::vector<replay::ParameterSnapshot> pool{share(agent.exploit_net().init(1)),
                                              share(agent.exploit_net().init(2))};
  std::vector<replay::ParameterSnapshot> snaps;
  for (int i = 0; i < 32; ++i) snaps.push_back(pool[(i * 7 + i / 3) % 2]);
  const double expected = cross_product_loss(agent, ts, snaps);
  const float loss = agent.update(replay::TransitionBatch::from(ts), snaps);
  EXPECT_NEAR(loss, expected, 1e-5 * (1.0 + expected));
}

TEST(ExploreUpdate, MultiplicityWeightingEqualsDistinctCopies) {
  ExploreAgent shared(small_config(), 5), copied(small_config(), 5);
  std::mt19937_64 rng(2);
  const auto batch = replay::TransitionBatch::from(random_transitions(rng, 4, 3, 2));
  const auto a = share(shared.exploit_net().init(1));
  const auto b = share(shared.exploit_net().init(2));
  std::vector<replay::ParameterSnapshot> by_pointer{a, a, b, a, b, a};
  std::vector<replay::ParameterSnapshot> by_copy;
  for (const auto& s : by_pointer) by_copy.push_back(share(*s));
  for (int step = 0; step < 3; ++step) {
    const float l1 = shared.update(batch, by_pointer);
    const float l2 = copied.update(batch, by_copy);
    EXPECT_NEAR(l1, l2, 1e-5f * (1.0f + l2));
  }
  for (std::size_t i = 0; i < shared.online().size(); ++i)
    ASSERT_NEAR(shared.online()[i], copied.online()[i], 1e-5f);
}

TEST(ExploreUpdate, FixedPointLeavesParametersUnchanged) {
  ExploreAgent agent(small_config(), 5);
  set_constant_delta(agent.online(), agent.network(), {0.0f, 0.0f});
  const Params zero_theta(agent.exploit_net().parameter_count());
  const auto before = agent.online();
  std::vector<replay::Transition> ts{transition(0, 0.0f, true), transition(1, 0.0f, true)};
  std::vector<replay::ParameterSnapshot> snaps{share(zero_theta)};
  EXPECT_EQ(agent.update(replay::TransitionBatch::from(ts), snaps), 0.0f);
  EXPECT_EQ(agent.online(), before);
}

TEST(ExploreUpdate, RepeatedUpdatesOnOnePairImprove) {
  ExploreAgent agent(small_config(), 8);
  const auto theta = share(agent.exploit_net().init(4));
  const std::vector<replay::ParameterSnapshot> snaps{theta};
  const auto batch = replay::TransitionBatch::from({transition(1, 2.0f, true)});
  float best = agent.update(batch, snaps);
  const float first = best;
  std::vector<float> checkpoints;
  for (int i = 0; i < 60; ++i) {
    best = std::min(best, agent.update(batch, snaps));
    if (i % 20 == 19) checkpoints.push_back(best);
  }
  EXPECT_LT(checkpoints[0], first);
  for (std::size_t i = 1; i < checkpoints.size(); ++i) EXPECT_LT(checkpoints[i], checkpoints[i - 1]);
}

TEST(ExploreUpdate, ProbesReceiveUpdatesAndSnapshotsStayPure) {
  ExploreAgent agent(small_config(), 6);
  std::mt19937_64 rng(3);
  const auto batch = replay::TransitionBatch::from(random_transitions(rng, 4, 3, 2));
  const Params theta = agent.exploit_net().init(7);
  const auto snap = share(theta);
  const std::vector<replay::ParameterSnapshot> snaps{snap, snap};
  const auto before = agent.online();
  const float loss = agent.update(batch, snaps);
  ASSERT_GT(loss, 0.0f);
  EXPECT_EQ(*snap, theta);
  const auto p0 = agent.network().probes(before.span());
  const auto p1 = agent.network().probes(agent.online().span());
  EXPECT_FALSE(std::equal(p0.begin(), p0.end(), p1.begin()));
}

TEST(ExploreUpdate, EmptyInputsAreUsageErrors) {
  ExploreAgent agent(small_config(), 6);
  const auto batch = replay::TransitionBatch::from({transition(0, 1.0f, true)});
  EXPECT_THROW(agent.update(batch, {}), UsageError);
  replay::TransitionBatch empty;
  const std::vector<replay::ParameterSnapshot> snaps{share(agent.exploit_net().init(1))};
  EXPECT_THROW(agent.update(empty, snaps), UsageError);
}

TEST(ExploreUpdate, DivergenceOnNonFiniteReward) {
  ExploreAgent agent(small_config(), 6);
  const auto batch = replay::TransitionBatch::from({transition(0, INFINITY, true)});
  const std::vector<replay::ParameterSnapshot> snaps{share(agent.exploit_net().init(1))};
  EXPECT_THROW(agent.update(batch, snaps), DivergenceError);
}

TEST(ExploreTarget, PolyakTowardsOnline) {
  auto config = small_config();
  config.tau = 1.0;
  ExploreAgent agent(config, 6);
  agent.online()[0] += 1.0f;
  agent.update_target();
  EXPECT_EQ(agent.target(), agent.online());
}

// weighted_loss gradient, probe states included, against central differences
// in double precision.
TEST(WeightedLoss, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  std::size_t probe_checked = 0, total_checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t obs = 2 + trial % 2, actions = 2 + trial % 3, probes = 1 + trial % 3;
    QNetwork<double> qnet(obs, actions, {6});
    ExplorationNetwork<double> net(qnet, probes, {7});
    auto omega = net.init(rng(), 0.8);
    for (std::size_t i = 0; i < net.probe_offset(); ++i) omega[i] += 0.05 * g(rng);
    std::vector<fncore::ParameterVector<double>> thetas;
    for (int k = 0; k < 2; ++k) {
      thetas.push_back(qnet.init(rng()));
      for (auto& v : thetas.back().values()) v += 0.1 * g(rng);
    }
    PairBatch<double> pairs;
    for (const auto& t : thetas) pairs.snapshots.push_back(t.span());
    for (std::size_t row = 0; row < 5; ++row) {
      for (std::size_t d = 0; d < obs; ++d) pairs.states.push_back(g(rng));
      pairs.actions.push_back(static_cast<std::uint32_t>(row % actions));
      pairs.snapshot_index.push_back(static_cast<std::uint32_t>(row % 2));
      pairs.targets.push_back(g(rng));
      pairs.weights.push_back(0.1 + 0.2 * static_cast<double>(row));
    }
    std::vector<double> grad(net.parameter_count(), 0.0);
    net.weighted_loss(omega.span(), pairs, grad);

    auto eval = [&](const std::vector<double>& p) {
      see::testing::LossEval e;
      std::vector<double> scratch(p.size(), 0.0);
      e.loss = net.weighted_loss(p, pairs, scratch);
      for (std::size_t k = 0; k < thetas.size(); ++k) {
        std::vector<double> emb, out;
        fncore::ForwardTrace<double> probe_trace, mlp_trace;
        net.embed(p, thetas[k].span(), emb, probe_trace);
        see::testing::append_pattern(probe_trace, e.pattern);
        for (std::size_t row = 0; row < pairs.rows(); ++row) {
          if (pairs.snapshot_index[row] != k) continue;
          net.delta_values(p, emb, std::span<const double>(pairs.states).subspan(row * obs, obs), 1, out,
                           mlp_trace);
          see::testing::append_pattern(mlp_trace, e.pattern);
        }
      }
      return e;
    };
    const auto all = see::testing::check_gradient(eval, omega.values(), grad);
    EXPECT_EQ(all.failures, 0u) << all.first_failure;
    total_checked += all.checked;

    // Probe block on its own, so coverage of that block is visible.
    std::vector<double> probe_grad(grad.begin() + static_cast<long>(net.probe_offset()), grad.end());
    auto probe_eval = [&](const std::vector<double>& probe_values) {
      auto p = omega.values();
      std::copy(probe_values.begin(), probe_values.end(), p.begin() + static_cast<long>(net.probe_offset()));
      return eval(p);
    };
    const std::vector<double> probe_values(omega.values().begin() + static_cast<long>(net.probe_offset()),
                                           omega.values().end());
    const auto pr = see::testing::check_gradient(probe_eval, probe_values, probe_grad);
    EXPECT_EQ(pr.failures, 0u) << pr.first_failure;
    probe_checked += pr.checked;
  }
  EXPECT_GT(total_checked, 300u);
  EXPECT_GT(probe_checked, 10u);
}

TEST(WeightedLoss, ThetaReceivesNoGradientSlot) {
  QNetwork<float> qnet(3, 2, {4});
  ExplorationNetwork<float> net(qnet, 2, {5});
  EXPECT_EQ(net.parameter_count(), net.mlp_spec().parameter_count() + 2 * 3);
  EXPECT_EQ(net.mlp_spec().input_dim, 3u + 2u * 2u);
  EXPECT_EQ(net.mlp_spec().output_dim, 2u);
}

TEST(TabularOracle, FiveStateChain) {
  // 0 -> 1 -> 2 -> 3 -> 4 (terminal), single action, rewards per transition.
  see::testing::TabularMdp m;
  m.states = 5;
  m.actions = 1;
  m.next = {1, 2, 3, 4, 4};
  m.reward = {0.2, 0.0, 3.0, 0.5, 1.0};
  m.terminal = {false, false, false, false, true};
  std::vector<double> q;
  ASSERT_GT(see::testing::value_iteration(m, 0.9, true, q), 0u);
  for (std::size_t s = 0; s < 5; ++s)
    EXPECT_NEAR(q[s], see::testing::path_max(m, 0.9, s, 0), 1e-9) << s;
  EXPECT_NEAR(q[0], 0.81 * 3.0, 1e-12);
}

TEST(TabularOracle, RandomDagsMatchPathEnumeration) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = see::testing::random_dag_mdp(rng, 3 + trial % 6, 1 + trial % 3);
    const double gamma = 0.5 + 0.5 * (trial % 10) / 10.0;
    std::vector<double> q;
    ASSERT_GT(see::testing::value_iteration(m, gamma, true, q), 0u);
    for (std::size_t s = 0; s < m.states; ++s)
      for (std::size_t a = 0; a < m.actions; ++a)
        ASSERT_NEAR(q[s * m.actions + a], see::testing::path_max(m, gamma, s, a), 1e-9);
  }
}

see::testing::TabularMdp chain_with_reward(std::size_t zeros, double reward) {
  see::testing::TabularMdp m;
  m.states = zeros + 1;
  m.actions = 1;
  for (std::size_t s = 0; s < zeros; ++s) {
    m.next.push_back(s + 1);
    m.reward.push_back(0.0);
    m.terminal.push_back(false);
  }
  m.next.push_back(zeros);
  m.reward.push_back(reward);
  m.terminal.push_back(true);
  return m;
}

TEST(TabularOracle, EpisodeLengthInsensitivity) {
  const double gamma = 1.0 - 1e-9;
  std::vector<double> q;
  for (std::size_t zeros : {0u, 5u, 50u, 400u}) {
    const auto m = chain_with_reward(zeros, 4.0);
    ASSERT_GT(see::testing::value_iteration(m, gamma, true, q, 5000), 0u);
    EXPECT_NEAR(q[0], 4.0 * std::pow(gamma, static_cast<double>(zeros)), 1e-12);
    // Only the discount attenuation, at most reward * zeros * (1 - gamma).
    EXPECT_NEAR(q[0], 4.0, 4.0 * static_cast<double>(zeros) * 1e-9 + 1e-12);
  }
  // Many small rewards against one large one: the max backup follows the
  // single largest reward, the ordinary sum follows the longer path.
  see::testing::TabularMdp m;
  const std::size_t len = 100;
  m.states = len + 2;
  m.actions = 2;
  m.next.assign(m.states * 2, 0);
  m.reward.assign(m.states * 2, 0.0);
  m.terminal.assign(m.states * 2, true);
  m.next[0] = 1;  // action 0: long path of unit rewards
  m.reward[0] = 1.0;
  m.terminal[0] = false;
  m.reward[1] = 5.0;  // action 1: one large reward, then done
  for (std::size_t s = 1; s <= len; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      m.next[s * 2 + a] = s + 1;
      m.reward[s * 2 + a] = 1.0;
      m.terminal[s * 2 + a] = s == len;
    }
  }
  std::vector<double> qmax, qsum;
  ASSERT_GT(see::testing::value_iteration(m, gamma, true, qmax, 5000), 0u);
  ASSERT_GT(see::testing::value_iteration(m, gamma, false, qsum, 5000), 0u);
  EXPECT_GT(qmax[1], qmax[0]);
  EXPECT_NEAR(qmax[1], 5.0, 1e-12);
  EXPECT_NEAR(qmax[0], 1.0, 1e-6);
  EXPECT_GT(qsum[0], qsum[1]);
}

}  // namespace
