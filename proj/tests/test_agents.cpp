#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include <algorithm>

#include "marl/cft.hpp"
#include "marl/kmeans.hpp"
#include "marl/ddpg.hpp"
#include "marl/serialize.hpp"
#include "support.hpp"

using namespace marl;
using namespace marl::test;

namespace {

GameSpec scalar_spec() {
  GameSpec spec;
  spec.n_agents = 2;
  spec.state_dim = 1;
  spec.action_dims = {1, 1};
  spec.gamma = 0.95;
  spec.alpha = 0.5;
  return spec;
}

GameSpec small_spec() {
  GameSpec spec;
  spec.n_agents = 2;
  spec.state_dim = 3;
  spec.action_dims = {1, 1};
  spec.gamma = 0.95;
  spec.alpha = 0.5;
  return spec;
}

JointTransition make_transition(const std::vector<double>& s,
                                const std::vector<std::vector<double>>& a,
                                const std::vector<double>& r, const std::vector<double>& s2) {
  JointTransition t;
  t.state = s;
  t.actions = a;
  t.rewards = r;
  t.next_state = s2;
  t.traces.resize(a.size());
  return t;
}

std::vector<JointTransition> random_batch(const GameSpec& spec, std::size_t n, Rng& rng) {
  std::vector<JointTransition> batch;
  for (std::size_t b = 0; b < n; ++b) {
    JointTransition t;
    for (std::size_t i = 0; i < spec.state_dim; ++i) t.state.push_back(rng.uniform(-1, 1));
    for (std::size_t i = 0; i < spec.state_dim; ++i) t.next_state.push_back(rng.uniform(-1, 1));
    for (std::size_t a = 0; a < spec.n_agents; ++a) {
      std::vector<double> act;
      for (std::size_t d = 0; d < spec.action_dims[a]; ++d) act.push_back(rng.uniform(-1, 1));
      t.actions.push_back(act);
      t.rewards.push_back(rng.uniform(-1, 1));
    }
    t.traces.resize(spec.n_agents);
    batch.push_back(std::move(t));
  }
  return batch;
}

AgentParams tiny_params() {
  AgentParams p;
  p.hidden = 4;
  return p;
}

}  // namespace

TEST_CASE("ddpg act: zero-weight actor emits the zero action") {
  Mlp actor = linear_net(1, 1, {0.0}, {0.0}, Activation::Tanh);
  Mlp critic = linear_net(3, 1, {0.0, 0.0, 0.0}, {0.0});
  AgentParams params;
  params.noise_sigma = 0.0;
  DdpgAgent agent(0, actor, critic, params);
  Rng rng(1);
  CHECK(agent.act(std::vector<double>{0.7}, false, rng).action[0] == 0.0);
}

TEST_CASE("ddpg act: exploit mode is deterministic, sigma zero matches it") {
  GameSpec spec = small_spec();
  Rng init(3);
  DdpgAgent agent(0, spec, tiny_params(), init);
  const std::vector<double> state{0.1, -0.4, 0.9};
  Rng r1(5), r2(6);
  const auto a1 = agent.act(state, false, r1).action;
  const auto a2 = agent.act(state, false, r2).action;
  CHECK(a1 == a2);
  agent.params.noise_sigma = 0.0;
  const auto a3 = agent.act(state, true, r1).action;
  CHECK(a3 == a1);
}

TEST_CASE("ddpg act: noisy actions stay in [-1, 1]") {
  GameSpec spec = small_spec();
  Rng init(4);
  DdpgAgent agent(0, spec, tiny_params(), init);
  agent.params.noise_sigma = 2.0;  // huge noise to stress the clamp
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    const auto a = agent.act(std::vector<double>{0.1, 0.2, 0.3}, true, rng).action;
    for (double x : a) {
      CHECK(x >= -1.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("ddpg update_critic: zero net at a fixed point stays put") {
  // Q == y == 0 everywhere, so gradients are exactly zero.
  Mlp actor = linear_net(1, 1, {0.0}, {0.0}, Activation::Tanh);
  Mlp critic = linear_net(3, 1, {0.0, 0.0, 0.0}, {0.0});
  DdpgAgent a0(0, actor, critic, AgentParams{});
  DdpgAgent a1(1, actor, critic, AgentParams{});
  std::vector<Agent*> all{&a0, &a1};

  const auto batch = {make_transition({0.4}, {{0.2}, {-0.3}}, {0.0, 0.0}, {0.6})};
  const double loss = a0.update_critic({batch}, scalar_spec(), all);
  CHECK(loss == 0.0);
  CHECK(a0.critic.layers()[0].weight.values == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(a0.critic_adam.t == 0);
}

TEST_CASE("ddpg update_critic: hand-computed loss on a scalar transition") {
  // Actor 0: u0(s) = 0.5 s + 0.1; actor 1: u1(s) = -0.2 s.
  // Critic (and its target copy): Q(s, a0, a1) = s + 2 a0 + 3 a1 + 0.25.
  DdpgAgent a0(0, linear_net(1, 1, {0.5}, {0.1}), linear_net(3, 1, {1.0, 2.0, 3.0}, {0.25}),
               AgentParams{});
  DdpgAgent a1(1, linear_net(1, 1, {-0.2}, {0.0}), linear_net(3, 1, {1.0, 2.0, 3.0}, {0.25}),
               AgentParams{});
  std::vector<Agent*> all{&a0, &a1};
  GameSpec spec = scalar_spec();

  const double s = 0.4, s2 = 0.6;
  const std::vector<std::vector<double>> acts{{0.2}, {-0.3}};
  const std::vector<double> rewards{1.0, 0.5};

  const double q = s + 2.0 * 0.2 + 3.0 * (-0.3) + 0.25;
  const double a0_next = 0.5 * s2 + 0.1, a1_next = -0.2 * s2;
  const double q_next = s2 + 2.0 * a0_next + 3.0 * a1_next + 0.25;
  const double shaped = 0.5 * rewards[0] - 0.5 * rewards[1];
  const double y = spec.gamma * q_next + shaped;

  const double loss =
      a0.update_critic({make_transition({s}, acts, rewards, {s2})}, spec, all);
  CHECK(loss == doctest::Approx((q - y) * (q - y)).epsilon(1e-12));
}

TEST_CASE("ddpg update_critic: loss trends down on a frozen batch") {
  GameSpec spec = small_spec();
  Rng init(7);
  DdpgAgent a0(0, spec, tiny_params(), init);
  DdpgAgent a1(1, spec, tiny_params(), init);
  std::vector<Agent*> all{&a0, &a1};
  Rng rng(21);
  const auto batch = random_batch(spec, 16, rng);

  const double first = a0.update_critic(batch, spec, all);
  double last = first;
  for (int i = 0; i < 49; ++i) last = a0.update_critic(batch, spec, all);
  CHECK(last < first);
}

TEST_CASE("ddpg update_actor: zero learning rate leaves parameters") {
  GameSpec spec = small_spec();
  Rng init(8);
  DdpgAgent agent(0, spec, tiny_params(), init);
  agent.params.actor_lr = 0.0;
  Rng rng(22);
  const auto batch = random_batch(spec, 8, rng);
  const auto before = mlp_to_json(agent.actor);
  agent.update_actor(batch, spec);
  CHECK(mlp_to_json(agent.actor) == before);
}

TEST_CASE("ddpg update_actor: a critic rewarding larger actions raises the mean") {
  // Q(s, a0, a1) = a0 exactly; ascending it must push u0 upward.
  GameSpec spec = scalar_spec();
  DdpgAgent agent(0, linear_net(1, 1, {0.3}, {0.0}, Activation::Tanh),
                  linear_net(3, 1, {0.0, 1.0, 0.0}, {0.0}), AgentParams{});
  agent.params.actor_lr = 1e-2;
  Rng rng(23);
  auto batch = random_batch(spec, 10, rng);

  auto mean_action = [&] {
    double m = 0.0;
    for (const auto& tr : batch) m += agent.actor.forward(tr.state)[0];
    return m / static_cast<double>(batch.size());
  };
  const double before = mean_action();
  const double objective = agent.update_actor(batch, spec);
  CHECK(objective == doctest::Approx(before).epsilon(1e-12));
  CHECK(mean_action() > before);
}

TEST_CASE("ddpg actor gradient matches finite differences of mean Q") {
  GameSpec spec = small_spec();
  Rng init(9);
  DdpgAgent a0(0, spec, tiny_params(), init);
  Rng rng(24);
  const auto batch = random_batch(spec, 6, rng);

  auto objective = [&] {
    double total = 0.0;
    for (const auto& tr : batch) {
      auto actions = tr.actions;
      actions[0] = a0.actor.forward(tr.state);
      total += a0.critic.forward(concat_state_actions(tr.state, actions))[0];
    }
    return total / static_cast<double>(batch.size());
  };

  a0.actor_backward(batch, spec);  // fills actor grads with d(-J)/dtheta
  const double h = 1e-5;
  std::size_t failed = 0, checked = 0;
  for (ParamTensor* p : a0.actor.params()) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = p->values[i];
      p->values[i] = saved + h;
      const double up = objective();
      p->values[i] = saved - h;
      const double down = objective();
      p->values[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = -p->grads[i];
      checked += 1;
      if (!close_rel(an, fd, 1e-4)) failed += 1;
    }
  }
  a0.actor.zero_grads();
  CHECK(checked > 0);
  CHECK(failed == 0);
}

TEST_CASE("ddpg sync_targets: endpoints and 1% drift") {
  DdpgAgent agent(0, linear_net(1, 1, {1.0}, {1.0}), linear_net(3, 1, {1.0, 1.0, 1.0}, {1.0}),
                  AgentParams{});
  // Target copies start equal; push the live nets away.
  agent.actor.layers()[0].weight.values = {2.0};
  agent.critic.layers()[0].weight.values = {2.0, 1.0, 1.0};

  agent.sync_targets(0.0);
  CHECK(agent.actor_target.layers()[0].weight.values[0] == 1.0);

  agent.sync_targets(0.01);
  CHECK(agent.actor_target.layers()[0].weight.values[0] == doctest::Approx(1.01).epsilon(1e-12));

  agent.sync_targets(1.0);
  CHECK(agent.actor_target.layers()[0].weight.values[0] == 2.0);
  CHECK(agent.critic_target.layers()[0].weight.values[0] == 2.0);
}

TEST_CASE("ddpg critic consumes permuted opponent actions without shape errors") {
  GameSpec spec;
  spec.n_agents = 3;
  spec.state_dim = 2;
  spec.action_dims = {1, 1, 1};
  spec.gamma = 0.9;
  spec.alpha = 0.25;
  Rng init(10);
  DdpgAgent agent(0, spec, tiny_params(), init);
  const std::vector<double> state{0.2, 0.4};
  const std::vector<std::vector<double>> acts{{0.1}, {0.5}, {-0.5}};
  const std::vector<std::vector<double>> swapped{{0.1}, {-0.5}, {0.5}};
  const double q1 = agent.critic.forward(concat_state_actions(state, acts))[0];
  const double q2 = agent.critic.forward(concat_state_actions(state, swapped))[0];
  CHECK(std::isfinite(q1));
  CHECK(std::isfinite(q2));
}

// ---------------------------------------------------------------------------
// Counterfactual agent pieces.

TEST_CASE("softmin: symmetric input gives the uniform distribution") {
  const auto p = softmin(std::vector<double>{0.25, 0.25, 0.25, 0.25}, 1.0);
  for (double x : p) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("softmin: two-point values match the closed form") {
  const auto p = softmin(std::vector<double>{0.0, 1.0}, 1.0);
  const double e1 = std::exp(-1.0);
  CHECK(p[0] == doctest::Approx(1.0 / (1.0 + e1)).epsilon(1e-9));
  CHECK(p[1] == doctest::Approx(e1 / (1.0 + e1)).epsilon(1e-9));

  const auto q = softmin(std::vector<double>{0.0, 10.0}, 1.0);
  const double e10 = std::exp(-10.0);
  CHECK(q[0] == doctest::Approx(1.0 / (1.0 + e10)).epsilon(1e-9));
  CHECK(q[1] == doctest::Approx(e10 / (1.0 + e10)).epsilon(1e-9));
}

TEST_CASE("softmin: probability vector, permutation equivariance, monotonicity") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(5);
    for (double& x : v) x = rng.uniform(-3.0, 3.0);
    const double T = rng.uniform(0.1, 2.0);
    const auto p = softmin(v, T);
    double sum = 0.0;
    for (double x : p) {
      CHECK(x >= 0.0);
      sum += x;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);

    std::vector<double> rev(v.rbegin(), v.rend());
    const auto pr = softmin(rev, T);
    for (std::size_t i = 0; i < v.size(); ++i)
      CHECK(p[i] == doctest::Approx(pr[v.size() - 1 - i]).epsilon(1e-12));

    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      if (v[i] < v[i + 1]) CHECK(p[i] > p[i + 1]);
  }
}

TEST_CASE("posterior_regrets: tagged examples") {
  const auto all_equal = posterior_regrets(std::vector<double>{3.0, 3.0, 3.0});
  CHECK(all_equal == std::vector<double>{0.0, 0.0, 0.0});
  const auto mixed = posterior_regrets(std::vector<double>{1.0, 3.0, 2.0});
  CHECK(mixed == std::vector<double>{2.0, 0.0, 1.0});
  const auto single = posterior_regrets(std::vector<double>{7.5});
  CHECK(single == std::vector<double>{0.0});
}

TEST_CASE("posterior_regrets: non-negative, one exact zero, shift invariant") {
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> q(6);
    for (double& x : q) x = rng.uniform(-5.0, 5.0);
    const auto r = posterior_regrets(q);
    bool has_zero = false;
    for (double x : r) {
      CHECK(x >= 0.0);
      if (x == 0.0) has_zero = true;
    }
    CHECK(has_zero);

    const double shift = rng.uniform(-10.0, 10.0);
    std::vector<double> shifted = q;
    for (double& x : shifted) x += shift;
    const auto rs = posterior_regrets(shifted);
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(rs[i] == doctest::Approx(r[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("regret matrix: random init puts every column on the simplex") {
  Rng rng(33);
  RegretMatrix m(5, 7);
  m.init_random(rng);
  CHECK_NOTHROW(m.check_columns(1e-12));
  for (double x : m.m) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("kl_divergence: zero iff equal, positive otherwise") {
  const std::vector<double> p{0.2, 0.3, 0.5};
  CHECK(kl_divergence(p, p) == 0.0);
  const std::vector<double> q{0.4, 0.3, 0.3};
  CHECK(kl_divergence(p, q) > 0.0);
  CHECK(kl_divergence(q, p) > 0.0);
}

TEST_CASE("k-parallel policy: zero heads give zero intents, equal heads equal intents") {
  KParallelPolicy pol;
  pol.encoder = Mlp::identity(2);
  pol.heads.assign(3, ParamTensor({2, 2}));
  const auto zero = pol.intents(std::vector<double>{0.5, -0.5});
  for (const auto& intent : zero)
    for (double x : intent) CHECK(x == 0.0);

  for (auto& head : pol.heads) head.values = {0.3, -0.2, 0.1, 0.4};
  const auto equal = pol.intents(std::vector<double>{0.5, -0.5});
  CHECK(equal[0] == equal[1]);
  CHECK(equal[1] == equal[2]);
}

TEST_CASE("k-parallel policy: identity encoder and identity head reproduce the state") {
  KParallelPolicy pol;
  pol.encoder = Mlp::identity(2);
  pol.squash = Activation::Identity;
  ParamTensor head({2, 2});
  head.values = {1.0, 0.0, 0.0, 1.0};
  pol.heads.push_back(std::move(head));
  const auto intents = pol.intents(std::vector<double>{1.0, 0.0});
  REQUIRE(intents.size() == 1);
  CHECK(intents[0] == std::vector<double>{1.0, 0.0});
}

TEST_CASE("scenario matching: exact hit, nearest centroid, lowest-index ties") {
  ScenarioModel model;
  model.centroids = {{0.0, 0.0}, {10.0, 10.0}, {0.0, 4.0}, {0.0, 2.0}, {0.0, 0.0}};
  CHECK(model.match(std::vector<double>{10.0, 10.0}) == 1);
  CHECK(model.match(std::vector<double>{1.0, 1.0}) == 0);
  // Equidistant from centroids 0 and 4 (identical points): lowest wins.
  CHECK(model.match(std::vector<double>{0.1, 0.0}) == 0);
  // Equidistant between centroids 2 and 3 at y = 3.
  CHECK(model.match(std::vector<double>{0.0, 3.0}) == 2);
}

namespace {

GameSpec cft_spec() {
  GameSpec spec;
  spec.n_agents = 2;
  spec.state_dim = 2;
  spec.action_dims = {2, 2};
  spec.gamma = 0.95;
  spec.alpha = 0.5;
  return spec;
}

CftConfig tiny_cft(std::size_t k = 4, std::size_t l = 2) {
  CftConfig c;
  c.k_intents = k;
  c.n_scenarios = l;
  c.epsilon = 0.1;
  c.lambda = 0.5;
  c.temperature = 0.5;
  return c;
}

}  // namespace

TEST_CASE("cft act: identical intents collapse the mixture to that intent") {
  Rng init(41);
  CftAgent agent(0, cft_spec(), tiny_params(), tiny_cft(), init);
  for (auto& head : agent.policy.heads) head.values = agent.policy.heads[0].values;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  agent.params.noise_sigma = 0.0;

  Rng rng(42);
  const std::vector<double> state{0.3, -0.8};
  const auto res = agent.act(state, false, rng);
  const auto intents = agent.generate_intents(state);
  for (std::size_t d = 0; d < res.action.size(); ++d)
    CHECK(res.action[d] == doctest::Approx(intents[0][d]).epsilon(1e-12));
  REQUIRE(res.trace.has_value());
  CHECK(res.trace->intents.size() == 4);
  CHECK(res.trace->scenario == 0);
}

TEST_CASE("cft act: epsilon zero is deterministic given state and M") {
  Rng init(43);
  CftAgent agent(0, cft_spec(), tiny_params(), tiny_cft(), init);
  agent.cft.epsilon = 0.0;
  agent.params.noise_sigma = 0.0;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  Rng r1(1), r2(999);
  const std::vector<double> state{0.3, -0.8};
  CHECK(agent.act(state, true, r1).action == agent.act(state, true, r2).action);
}

TEST_CASE("cft act: epsilon one samples the low-regret intent almost always") {
  Rng init(44);
  CftAgent agent(0, cft_spec(), tiny_params(), tiny_cft(4, 2), init);
  agent.cft.epsilon = 1.0;
  agent.cft.temperature = 0.1;
  agent.params.noise_sigma = 0.0;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  agent.regrets.set_column(0, std::vector<double>{0.0, 1.0, 1.0, 1.0});

  // Make the intents distinguishable so the draw can be identified.
  Rng shake(45);
  for (auto& head : agent.policy.heads)
    for (double& w : head.values) w = shake.uniform(-1.0, 1.0);

  const std::vector<double> state{0.0, 0.0};  // scenario 0
  const auto intents = agent.generate_intents(state);
  Rng rng(46);
  std::size_t low_regret_picks = 0;
  const std::size_t trials = 10000;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto res = agent.act(state, true, rng);
    if (res.action == intents[0]) low_regret_picks += 1;
  }
  CHECK(static_cast<double>(low_regret_picks) / static_cast<double>(trials) > 0.95);
}

TEST_CASE("counterfactual_q: frozen linear critic scores intents") {
  GameSpec spec = scalar_spec();
  Rng init(47);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(2, 2), init);
  agent.critic = linear_net(3, 1, {0.0, 1.0, 2.0}, {0.0});  // Q = a0 + 2 a1

  const std::vector<std::vector<double>> joint{{0.9}, {1.0}};
  const std::vector<std::vector<double>> intents{{0.1}, {0.5}};
  const auto qs =
      agent.counterfactual_q(std::vector<double>{0.0}, joint, intents);
  REQUIRE(qs.size() == 2);
  CHECK(qs[0] == doctest::Approx(2.1).epsilon(1e-12));
  CHECK(qs[1] == doctest::Approx(2.5).epsilon(1e-12));

  // Substitution identity: an intent equal to the executed action scores Q(s, a).
  const auto same = agent.counterfactual_q(std::vector<double>{0.0}, joint, {{0.9}});
  CHECK(same[0] == doctest::Approx(0.9 + 2.0).epsilon(1e-12));

  // Permuting the intent list permutes the outputs.
  const auto swapped =
      agent.counterfactual_q(std::vector<double>{0.0}, joint, {{0.5}, {0.1}});
  CHECK(swapped[0] == qs[1]);
  CHECK(swapped[1] == qs[0]);
}

namespace {

// Frozen batch for regret-column tests: every sample within a scenario
// shares the same state, actions and intents, so the posterior target is
// constant per column and the fixed point is exact.
std::vector<JointTransition> frozen_cft_batch(CftAgent& agent, const GameSpec& spec) {
  std::vector<JointTransition> batch;
  Rng rng(48);
  for (std::size_t l = 0; l < agent.cft.n_scenarios; ++l) {
    JointTransition proto;
    proto.state = agent.scenarios.centroids[l];
    for (std::size_t a = 0; a < spec.n_agents; ++a) {
      std::vector<double> act;
      for (std::size_t d = 0; d < spec.action_dims[a]; ++d) act.push_back(rng.uniform(-1, 1));
      proto.actions.push_back(act);
      proto.rewards.push_back(rng.uniform(-1, 1));
    }
    for (std::size_t i = 0; i < spec.state_dim; ++i)
      proto.next_state.push_back(rng.uniform(-1, 1));
    CftTrace trace;
    trace.scenario = l;
    for (std::size_t k = 0; k < agent.cft.k_intents; ++k) {
      std::vector<double> intent;
      for (std::size_t d = 0; d < spec.action_dims[0]; ++d)
        intent.push_back(rng.uniform(-1, 1));
      trace.intents.push_back(intent);
    }
    proto.traces.assign(spec.n_agents, std::nullopt);
    proto.traces[0] = trace;
    for (int copies = 0; copies < 3; ++copies) batch.push_back(proto);
  }
  return batch;
}

std::vector<double> expected_regret_target(const CftAgent& agent, const JointTransition& tr) {
  const auto qs = agent.counterfactual_q(tr.state, tr.actions, tr.traces[0]->intents);
  const double top = *std::max_element(qs.begin(), qs.end());
  std::vector<double> target(qs.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < qs.size(); ++k) {
    target[k] = (top - qs[k]) + 1e-6;
    sum += target[k];
  }
  for (double& x : target) x /= sum;
  return target;
}

}  // namespace

TEST_CASE("cft critic_update: lambda one leaves the regret matrix bit-identical") {
  GameSpec spec = cft_spec();
  Rng init(49);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(), init);
  DdpgAgent other(1, spec, tiny_params(), init);
  agent.cft.lambda = 1.0;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  std::vector<Agent*> all{&agent, &other};

  const auto batch = frozen_cft_batch(agent, spec);
  const auto m_before = agent.regrets.m;
  const auto [td, kl] = agent.update_critic(batch, spec, all);
  CHECK(agent.regrets.m == m_before);
  CHECK(kl == 0.0);
  CHECK(td >= 0.0);
}

TEST_CASE("cft critic_update: lambda zero drives columns to the posterior target") {
  GameSpec spec = cft_spec();
  Rng init(50);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(4, 2), init);
  DdpgAgent other(1, spec, tiny_params(), init);
  agent.cft.lambda = 0.0;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  std::vector<Agent*> all{&agent, &other};

  const auto batch = frozen_cft_batch(agent, spec);
  const auto critic_before = mlp_to_json(agent.critic);
  for (int step = 0; step < 200; ++step) agent.update_critic(batch, spec, all);
  CHECK(mlp_to_json(agent.critic) == critic_before);  // TD side inert at lambda 0

  for (std::size_t l = 0; l < 2; ++l) {
    // One representative per scenario; copies are identical by construction.
    const auto target = expected_regret_target(agent, batch[l * 3]);
    const auto col = agent.regrets.column(l);
    double tv = 0.0;
    for (std::size_t k = 0; k < col.size(); ++k) tv += std::abs(col[k] - target[k]);
    tv *= 0.5;
    CHECK(tv < 0.05);
  }

  // With columns at the target the KL term vanishes.
  for (std::size_t l = 0; l < 2; ++l)
    agent.regrets.set_column(l, expected_regret_target(agent, batch[l * 3]));
  const auto [td, kl] = agent.update_critic(batch, spec, all);
  (void)td;
  CHECK(kl == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("cft critic_update: columns stay on the simplex through training") {
  GameSpec spec = cft_spec();
  Rng init(51);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(4, 2), init);
  DdpgAgent other(1, spec, tiny_params(), init);
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  std::vector<Agent*> all{&agent, &other};
  Rng rng(52);
  for (int round = 0; round < 25; ++round) {
    auto batch = random_batch(spec, 8, rng);
    for (auto& tr : batch) {
      CftTrace trace;
      trace.scenario = rng.index(2);
      for (std::size_t k = 0; k < 4; ++k)
        trace.intents.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
      tr.traces[0] = trace;
    }
    agent.update_critic(batch, spec, all);
    CHECK_NOTHROW(agent.regrets.check_columns(1e-9));
  }
}

TEST_CASE("cft critic_update: missing trace is rejected") {
  GameSpec spec = cft_spec();
  Rng init(53);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(), init);
  DdpgAgent other(1, spec, tiny_params(), init);
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  std::vector<Agent*> all{&agent, &other};
  Rng rng(54);
  const auto batch = random_batch(spec, 2, rng);  // traces left empty
  CHECK_THROWS_AS(agent.update_critic(batch, spec, all), std::runtime_error);
}

TEST_CASE("cft actor_update: zero learning rate leaves parameters") {
  GameSpec spec = cft_spec();
  Rng init(55);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(), init);
  agent.params.actor_lr = 0.0;
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  Rng rng(56);
  const auto batch = random_batch(spec, 6, rng);
  const auto enc_before = mlp_to_json(agent.policy.encoder);
  const auto head_before = agent.policy.heads[0].values;
  agent.update_actor(batch, spec);
  CHECK(mlp_to_json(agent.policy.encoder) == enc_before);
  CHECK(agent.policy.heads[0].values == head_before);
}

TEST_CASE("cft actor_update: critic rewarding the first coordinate raises the mixture") {
  GameSpec spec = scalar_spec();
  Rng init(57);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(3, 2), init);
  agent.critic = linear_net(3, 1, {0.0, 1.0, 0.0}, {0.0});  // Q = own action
  agent.params.actor_lr = 1e-2;
  agent.scenarios.centroids = {{0.0}, {5.0}};
  Rng rng(58);
  const auto batch = random_batch(spec, 10, rng);

  auto mean_mixture = [&] {
    double m = 0.0;
    for (const auto& tr : batch) m += agent.mixture_action(tr.state)[0];
    return m / static_cast<double>(batch.size());
  };
  const double before = mean_mixture();
  const double objective = agent.update_actor(batch, spec);
  CHECK(objective == doctest::Approx(before).epsilon(1e-12));
  CHECK(mean_mixture() > before);
}

TEST_CASE("cft actor gradient matches finite differences over heads and encoder") {
  GameSpec spec = cft_spec();
  Rng init(59);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(3, 2), init);
  agent.scenarios.centroids = {{0.0, 0.0}, {5.0, 5.0}};
  Rng rng(60);
  const auto batch = random_batch(spec, 5, rng);

  auto objective = [&] {
    double total = 0.0;
    for (const auto& tr : batch) {
      auto actions = tr.actions;
      actions[0] = agent.mixture_action(tr.state);
      total += agent.critic.forward(concat_state_actions(tr.state, actions))[0];
    }
    return total / static_cast<double>(batch.size());
  };

  agent.actor_backward(batch, spec);
  const double h = 1e-5;
  std::size_t failed = 0, checked = 0;
  for (ParamTensor* p : agent.actor_params()) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double saved = p->values[i];
      p->values[i] = saved + h;
      const double up = objective();
      p->values[i] = saved - h;
      const double down = objective();
      p->values[i] = saved;
      const double fd = (up - down) / (2.0 * h);
      const double an = -p->grads[i];
      checked += 1;
      if (!close_rel(an, fd, 1e-4)) failed += 1;
    }
  }
  CHECK(checked > 0);
  CHECK(failed == 0);
}

TEST_CASE("cft refit: one cluster lands on the mean") {
  GameSpec spec = cft_spec();
  Rng init(61);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(2, 1), init);
  const std::vector<std::vector<double>> states{{0.0, 0.0}, {1.0, 1.0}, {2.0, -1.0}};
  Rng rng(62);
  agent.refit_scenarios(states, rng);
  REQUIRE(agent.scenarios.centroids.size() == 1);
  CHECK(agent.scenarios.centroids[0][0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(agent.scenarios.centroids[0][1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
}

TEST_CASE("kmeans: two well-separated clouds are recovered") {
  Rng rng(63);
  std::vector<std::vector<double>> points;
  for (int i = 0; i < 60; ++i)
    points.push_back({rng.uniform(-0.02, 0.02), rng.uniform(-0.02, 0.02)});
  for (int i = 0; i < 60; ++i)
    points.push_back({8.0 + rng.uniform(-0.02, 0.02), 8.0 + rng.uniform(-0.02, 0.02)});
  const auto result = kmeans(points, 2, rng);
  REQUIRE(result.centroids.size() == 2);
  const bool first_low = result.centroids[0][0] < 4.0;
  const auto& low = result.centroids[first_low ? 0 : 1];
  const auto& high = result.centroids[first_low ? 1 : 0];
  CHECK(std::abs(low[0]) < 0.1);
  CHECK(std::abs(low[1]) < 0.1);
  CHECK(std::abs(high[0] - 8.0) < 0.1);
  CHECK(std::abs(high[1] - 8.0) < 0.1);
}

TEST_CASE("kmeans: more clusters than distinct points keeps surplus seeds") {
  Rng rng(64);
  const std::vector<std::vector<double>> points{{1.0, 1.0}, {1.0, 1.0}, {2.0, 2.0}};
  const std::vector<std::vector<double>> previous{{9.0, 9.0}, {8.0, 8.0}, {7.0, 7.0},
                                                  {6.0, 6.0}};
  const auto result = kmeans(points, 4, rng, previous);
  REQUIRE(result.centroids.size() == 4);
  // Both distinct points must be represented; the surplus comes from the
  // previous centroids, in order, and no exception is thrown.
  std::size_t from_previous = 0;
  for (const auto& c : result.centroids)
    if (c[0] > 5.0) from_previous += 1;
  CHECK(from_previous == 2);
}

TEST_CASE("kmeans: empty input is rejected, seeding is deterministic") {
  Rng rng(65);
  CHECK_THROWS_AS(kmeans({}, 2, rng), std::runtime_error);
  Rng r1(66), r2(66);
  std::vector<std::vector<double>> points;
  Rng gen(67);
  for (int i = 0; i < 30; ++i) points.push_back({gen.uniform(0, 1), gen.uniform(0, 1)});
  CHECK(kmeans(points, 4, r1).centroids == kmeans(points, 4, r2).centroids);
}

TEST_CASE("cft agent: fixed seed reproduces the action trace") {
  GameSpec spec = cft_spec();
  Rng i1(70), i2(70);
  CftAgent a(0, spec, tiny_params(), tiny_cft(), i1);
  CftAgent b(0, spec, tiny_params(), tiny_cft(), i2);
  Rng r1(71), r2(71), walk(72);
  for (int step = 0; step < 50; ++step) {
    const std::vector<double> state{walk.uniform(-1, 1), walk.uniform(-1, 1)};
    CHECK(a.act(state, true, r1).action == b.act(state, true, r2).action);
  }
}

TEST_CASE("cft generate_intents count and dimensions") {
  GameSpec spec = cft_spec();
  Rng init(73);
  CftAgent agent(0, spec, tiny_params(), tiny_cft(5, 3), init);
  const auto intents = agent.generate_intents(std::vector<double>{0.1, 0.2});
  CHECK(intents.size() == 5);
  for (const auto& intent : intents) {
    CHECK(intent.size() == 2);
    for (double x : intent) {
      CHECK(x >= -1.0);
      CHECK(x <= 1.0);
    }
  }
}
