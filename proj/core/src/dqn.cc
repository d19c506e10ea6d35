#include "jamlab/dqn.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace jamlab {
namespace {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

void check_config(const DqnConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("DqnConfig: ") + what);
  };
  require(c.episodes >= 0, "episodes must be >= 0");
  require(c.epsilon_start >= 0 && c.epsilon_start <= 1, "epsilon_start must lie in [0, 1]");
  require(c.epsilon_end >= 0 && c.epsilon_end <= 1, "epsilon_end must lie in [0, 1]");
  require(c.epsilon_decay_episodes > 0, "epsilon_decay_episodes must be positive");
  require(c.replay_capacity > 0, "replay_capacity must be positive");
  require(c.batch_size > 0, "batch_size must be positive");
  require(c.replay_capacity >= c.batch_size, "replay_capacity must be >= batch_size");
  require(c.learn_start >= 0, "learn_start must be >= 0");
  require(c.train_every > 0, "train_every must be positive");
  require(c.target_sync_every > 0, "target_sync_every must be positive");
  require(c.learning_rate > 0, "learning_rate must be positive");
  require(c.discount >= 0 && c.discount <= 1, "discount must lie in [0, 1]");
  for (int h : c.hidden) require(h > 0, "hidden sizes must be positive");
}

class GreedyNetPolicy final : public Policy {
 public:
  GreedyNetPolicy(std::array<std::shared_ptr<const Policy>, 2> fixed,
                  std::array<std::optional<Mlp>, 2> nets, FeatureEncoder encoder)
      : fixed_(std::move(fixed)), nets_(std::move(nets)), encoder_(std::move(encoder)) {}

  std::vector<double> action_probabilities(const GameState& state) const override {
    const PlayerId p = state.current_player();
    if (p != 0 && p != 1) throw std::logic_error("policy queried off-turn");
    if (fixed_[p] != nullptr) return fixed_[p]->action_probabilities(state);
    const auto legal = state.legal_actions();
    std::vector<double> probs(legal.size(), 0.0);
    if (!nets_[p].has_value()) {
      std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(legal.size()));
      return probs;
    }
    const Eigen::VectorXd q = nets_[p]->forward(encoder_.encode(state));
    int best = 0;
    for (int i = 1; i < static_cast<int>(legal.size()); ++i) {
      if (q(i) > q(best)) best = i;
    }
    probs[static_cast<size_t>(best)] = 1.0;
    return probs;
  }

 private:
  std::array<std::shared_ptr<const Policy>, 2> fixed_;
  std::array<std::optional<Mlp>, 2> nets_;
  FeatureEncoder encoder_;
};

}  // namespace

DqnSolver::DqnSolver(std::shared_ptr<const Game> game, FeatureEncoder encoder,
                     DqnConfig config)
    : game_(std::move(game)),
      encoder_(std::move(encoder)),
      config_(std::move(config)),
      rng_(mix_seed(config_.seed, 0xd9f1)) {
  if (game_ == nullptr) throw std::invalid_argument("null game");
  check_config(config_);
  for (int p = 0; p < 2; ++p) {
    replays_.emplace_back(static_cast<std::size_t>(config_.replay_capacity));
  }
}

void DqnSolver::set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy) {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  if (episode_ > 0) throw std::logic_error("cannot pin a player after training started");
  fixed_[player] = std::move(policy);
}

double DqnSolver::epsilon() const {
  const double frac =
      std::min(1.0, static_cast<double>(episode_) /
                        static_cast<double>(config_.epsilon_decay_episodes));
  return config_.epsilon_start + frac * (config_.epsilon_end - config_.epsilon_start);
}

void DqnSolver::ensure_net(PlayerId player, int num_actions) {
  if (q_nets_[player].has_value()) {
    if (q_nets_[player]->output_size() != num_actions) {
      throw std::logic_error("dqn requires a constant action count per player");
    }
    return;
  }
  MlpSpec spec;
  spec.layer_sizes.push_back(encoder_.size);
  spec.layer_sizes.insert(spec.layer_sizes.end(), config_.hidden.begin(),
                          config_.hidden.end());
  spec.layer_sizes.push_back(num_actions);
  spec.head = OutputHead::kIdentity;
  Rng init(mix_seed(config_.seed, 0x9600u + static_cast<unsigned>(player)));
  q_nets_[player].emplace(spec, init.next_u64());
  target_nets_[player] = q_nets_[player];
  adam_[player].emplace(*q_nets_[player]);
}

int DqnSolver::greedy_action(const Mlp& net, const Eigen::VectorXd& features) const {
  const Eigen::VectorXd q = net.forward(features);
  int best = 0;
  for (Eigen::Index i = 1; i < q.size(); ++i) {
    if (q(i) > q(best)) best = static_cast<int>(i);
  }
  return best;
}

void DqnSolver::run_episode() {
  const double eps = epsilon();
  auto state = game_->new_initial_state();
  std::array<std::optional<Pending>, 2> pending;

  while (!state->is_terminal()) {
    if (state->is_chance()) {
      const auto outcomes = state->chance_outcomes();
      std::vector<double> probs;
      probs.reserve(outcomes.size());
      for (const auto& [action, prob] : outcomes) probs.push_back(prob);
      state->apply_action(outcomes[rng_.sample_discrete(probs)].first);
      continue;
    }
    const PlayerId p = state->current_player();
    const auto legal = state->legal_actions();
    if (!learns(p)) {
      const auto probs = fixed_[p]->action_probabilities(*state);
      state->apply_action(legal[rng_.sample_discrete(probs)]);
      continue;
    }
    Eigen::VectorXd features = encoder_.encode(*state);
    if (pending[p].has_value()) {
      DqnTransition t;
      t.features = std::move(pending[p]->features);
      t.action = pending[p]->action;
      t.reward = 0.0;
      t.next_features = features;
      t.terminal = false;
      store(p, std::move(t));
    }
    ensure_net(p, static_cast<int>(legal.size()));
    int action;
    if (rng_.uniform() < eps) {
      action = rng_.uniform_int(static_cast<int>(legal.size()));
    } else {
      action = greedy_action(*q_nets_[p], features);
    }
    pending[p] = Pending{std::move(features), action};
    state->apply_action(legal[static_cast<size_t>(action)]);
  }

  const auto utilities = state->returns();
  for (PlayerId p = 0; p < 2; ++p) {
    if (!learns(p) || !pending[p].has_value()) continue;
    DqnTransition t;
    t.features = std::move(pending[p]->features);
    t.action = pending[p]->action;
    t.reward = utilities[static_cast<size_t>(p)];
    t.terminal = true;
    store(p, std::move(t));
  }
  episode_returns_.push_back(utilities[0]);
  episode_ += 1;
}

void DqnSolver::store(PlayerId player, DqnTransition transition) {
  replays_[static_cast<size_t>(player)].push(std::move(transition));
  stored_[player] += 1;
  const auto size = static_cast<std::int64_t>(replays_[static_cast<size_t>(player)].size());
  if (size >= config_.batch_size && size >= config_.learn_start &&
      stored_[player] % config_.train_every == 0) {
    train_step(player);
  }
}

double DqnSolver::td_target(const DqnTransition& transition, PlayerId player) const {
  if (transition.terminal) return transition.reward;
  if (!target_nets_[player].has_value()) {
    throw std::logic_error("td_target before any network exists");
  }
  const Eigen::VectorXd q = target_nets_[player]->forward(transition.next_features);
  return transition.reward + config_.discount * q.maxCoeff();
}

void DqnSolver::train_step(PlayerId player) {
  Mlp& net = *q_nets_[player];
  const auto& replay = replays_[static_cast<size_t>(player)];
  TrainBatch batch;
  batch.inputs.resize(encoder_.size, config_.batch_size);
  std::vector<const DqnTransition*> picks(static_cast<size_t>(config_.batch_size));
  for (int j = 0; j < config_.batch_size; ++j) {
    picks[static_cast<size_t>(j)] = &replay.sample(rng_);
    batch.inputs.col(j) = picks[static_cast<size_t>(j)]->features;
  }
  // Regress only the taken action's value: all other outputs get their own
  // prediction as target, which zeroes their gradient.
  batch.targets = net.forward_batch(batch.inputs);
  for (int j = 0; j < config_.batch_size; ++j) {
    batch.targets(picks[static_cast<size_t>(j)]->action, j) =
        td_target(*picks[static_cast<size_t>(j)], player);
  }
  const double loss = config_.use_adam
                          ? net.train_adam(batch, *adam_[player], config_.learning_rate)
                          : net.train_sgd(batch, config_.learning_rate);
  if (!std::isfinite(loss)) {
    throw std::runtime_error("dqn training diverged for player " + std::to_string(player) +
                             " at episode " + std::to_string(episode_));
  }
  last_loss_[player] = loss;
  steps_[player] += 1;
  if (steps_[player] % config_.target_sync_every == 0) {
    target_nets_[player] = q_nets_[player];
  }
}

void DqnSolver::train() {
  while (episode_ < config_.episodes) run_episode();
}

double DqnSolver::last_loss(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  return last_loss_[player];
}

const RingReplay<DqnTransition>& DqnSolver::replay(PlayerId player) const {
  return replays_.at(static_cast<size_t>(player));
}

const Mlp* DqnSolver::q_net(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  return q_nets_[player].has_value() ? &*q_nets_[player] : nullptr;
}

std::shared_ptr<const Policy> DqnSolver::greedy_policy() const {
  return std::make_shared<GreedyNetPolicy>(fixed_, q_nets_, encoder_);
}

}  // namespace jamlab
