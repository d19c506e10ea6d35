#include "jamlab/deep_cfr.h"

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

void check_config(const DeepCfrConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("DeepCfrConfig: ") + what);
  };
  require(c.iterations >= 0, "iterations must be >= 0");
  require(c.traversals_per_iteration > 0, "traversals_per_iteration must be positive");
  require(c.batch_size > 0, "batch_size must be positive");
  require(c.advantage_capacity >= c.batch_size, "advantage_capacity must be >= batch_size");
  require(c.strategy_capacity >= c.batch_size, "strategy_capacity must be >= batch_size");
  require(c.advantage_train_steps > 0, "advantage_train_steps must be positive");
  require(c.strategy_train_steps > 0, "strategy_train_steps must be positive");
  require(c.learning_rate > 0, "learning_rate must be positive");
  for (int h : c.advantage_hidden) require(h > 0, "advantage_hidden sizes must be positive");
  for (int h : c.strategy_hidden) require(h > 0, "strategy_hidden sizes must be positive");
}

std::vector<double> regret_matched(const Eigen::VectorXd& advantages) {
  const Eigen::Index n = advantages.size();
  std::vector<double> probs(n);
  double positive = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) positive += std::max(advantages(i), 0.0);
  if (positive > 0.0) {
    for (Eigen::Index i = 0; i < n; ++i) probs[i] = std::max(advantages(i), 0.0) / positive;
  } else {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(n));
  }
  return probs;
}

// Shared profile object handed out by the solver: fixed policies win, then
// per-player nets, then uniform.
class NetProfilePolicy final : public Policy {
 public:
  NetProfilePolicy(std::array<std::shared_ptr<const Policy>, 2> fixed,
                   std::array<std::optional<Mlp>, 2> nets, FeatureEncoder encoder,
                   bool regret_match)
      : fixed_(std::move(fixed)),
        nets_(std::move(nets)),
        encoder_(std::move(encoder)),
        regret_match_(regret_match) {}

  std::vector<double> action_probabilities(const GameState& state) const override {
    const PlayerId p = state.current_player();
    if (p != 0 && p != 1) throw std::logic_error("policy queried off-turn");
    if (fixed_[p] != nullptr) return fixed_[p]->action_probabilities(state);
    const auto legal = state.legal_actions();
    if (!nets_[p].has_value()) {
      return std::vector<double>(legal.size(), 1.0 / static_cast<double>(legal.size()));
    }
    if (regret_match_) {
      return regret_matched(nets_[p]->forward(encoder_.encode(state)));
    }
    return evaluate_policy_net(*nets_[p], encoder_, state);
  }

 private:
  std::array<std::shared_ptr<const Policy>, 2> fixed_;
  std::array<std::optional<Mlp>, 2> nets_;
  FeatureEncoder encoder_;
  bool regret_match_;
};

}  // namespace

std::vector<double> masked_policy(const Eigen::VectorXd& output,
                                  const std::vector<ActionId>& legal) {
  if (legal.empty()) throw std::invalid_argument("masked_policy with no legal actions");
  std::vector<double> probs(legal.size());
  double total = 0.0;
  for (size_t i = 0; i < legal.size(); ++i) {
    const ActionId a = legal[i];
    if (a < 0 || a >= output.size()) throw std::out_of_range("legal action outside net output");
    probs[i] = std::max(output(a), 0.0);
    total += probs[i];
  }
  if (total < 1e-12) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(legal.size()));
  } else {
    for (auto& p : probs) p /= total;
  }
  return probs;
}

std::vector<double> evaluate_policy_net(const Mlp& net, const FeatureEncoder& encoder,
                                        const GameState& state) {
  return masked_policy(net.forward(encoder.encode(state)), state.legal_actions());
}

DeepCfrSolver::DeepCfrSolver(std::shared_ptr<const Game> game, FeatureEncoder encoder,
                             DeepCfrConfig config)
    : game_(std::move(game)),
      encoder_(std::move(encoder)),
      config_(std::move(config)),
      rng_(mix_seed(config_.seed, 0xdcf0)) {
  if (game_ == nullptr) throw std::invalid_argument("null game");
  check_config(config_);
  for (int p = 0; p < 2; ++p) {
    advantage_buffers_.emplace_back(static_cast<std::size_t>(config_.advantage_capacity));
    strategy_buffers_.emplace_back(static_cast<std::size_t>(config_.strategy_capacity));
  }
}

void DeepCfrSolver::set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy) {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  if (iteration_ > 0) throw std::logic_error("cannot pin a player after training started");
  fixed_[player] = std::move(policy);
}

int DeepCfrSolver::action_count(PlayerId player) const {
  if (action_count_[player] < 0) {
    throw std::logic_error("action count not yet observed for this player");
  }
  return action_count_[player];
}

MlpSpec DeepCfrSolver::advantage_spec(PlayerId player) const {
  MlpSpec spec;
  spec.layer_sizes.push_back(encoder_.size);
  spec.layer_sizes.insert(spec.layer_sizes.end(), config_.advantage_hidden.begin(),
                          config_.advantage_hidden.end());
  spec.layer_sizes.push_back(action_count(player));
  spec.head = OutputHead::kIdentity;
  return spec;
}

MlpSpec DeepCfrSolver::strategy_spec(PlayerId player) const {
  MlpSpec spec;
  spec.layer_sizes.push_back(encoder_.size);
  spec.layer_sizes.insert(spec.layer_sizes.end(), config_.strategy_hidden.begin(),
                          config_.strategy_hidden.end());
  spec.layer_sizes.push_back(action_count(player));
  spec.head = OutputHead::kSoftmax;
  return spec;
}

std::vector<double> DeepCfrSolver::behavior_probs(PlayerId player,
                                                  const GameState& state) const {
  if (fixed_[player] != nullptr) return fixed_[player]->action_probabilities(state);
  const auto legal = state.legal_actions();
  if (!advantage_nets_[player].has_value()) {
    return std::vector<double>(legal.size(), 1.0 / static_cast<double>(legal.size()));
  }
  return regret_matched(advantage_nets_[player]->forward(encoder_.encode(state)));
}

double DeepCfrSolver::traverse(const GameState& state, PlayerId traverser, double weight) {
  if (state.is_terminal()) return state.returns()[traverser];
  if (state.is_chance()) {
    const auto outcomes = state.chance_outcomes();
    std::vector<double> probs;
    probs.reserve(outcomes.size());
    for (const auto& [action, prob] : outcomes) probs.push_back(prob);
    const auto child = state.child(outcomes[rng_.sample_discrete(probs)].first);
    return traverse(*child, traverser, weight);
  }

  const PlayerId player = state.current_player();
  const auto legal = state.legal_actions();
  const int n = static_cast<int>(legal.size());
  if (action_count_[player] < 0) {
    action_count_[player] = n;
  } else if (action_count_[player] != n) {
    throw std::logic_error("deep solver requires a constant action count per player");
  }

  const auto probs = behavior_probs(player, state);
  if (player == traverser) {
    Eigen::VectorXd values(n);
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto child = state.child(legal[i]);
      values(i) = traverse(*child, traverser, weight);
      value += probs[i] * values(i);
    }
    AdvantageSample sample;
    sample.features = encoder_.encode(state);
    sample.regrets = values.array() - value;
    sample.weight = weight;
    advantage_buffers_[traverser].add(std::move(sample), rng_);
    return value;
  }

  if (learns(player)) {
    StrategySample sample;
    sample.features = encoder_.encode(state);
    sample.probs = Eigen::Map<const Eigen::VectorXd>(probs.data(), n);
    sample.weight = weight;
    strategy_buffers_[player].add(std::move(sample), rng_);
  }
  const auto child = state.child(legal[rng_.sample_discrete(probs)]);
  return traverse(*child, traverser, weight);
}

void DeepCfrSolver::fit_advantage(PlayerId player) {
  const auto& samples = advantage_buffers_[player].items();
  if (samples.empty()) return;
  Rng fit_rng(mix_seed(config_.seed, 0xad00u + 2u * static_cast<unsigned>(iteration_) +
                                         static_cast<unsigned>(player)));
  advantage_nets_[player].emplace(advantage_spec(player), fit_rng.next_u64());
  Mlp& net = *advantage_nets_[player];
  AdamState adam(net);
  const int count = static_cast<int>(samples.size());

  // Regret matching is invariant to a positive rescaling of the advantages,
  // so train against targets normalized by the buffer's largest magnitude.
  // Without this, games whose utilities sit far below the net's initial
  // output scale never train down to the signal.
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, s.regrets.cwiseAbs().maxCoeff());
  if (scale <= 0.0) scale = 1.0;

  double loss = 0.0;
  for (int step = 0; step < config_.advantage_train_steps; ++step) {
    TrainBatch batch;
    batch.inputs.resize(encoder_.size, config_.batch_size);
    batch.targets.resize(net.output_size(), config_.batch_size);
    batch.weights.resize(config_.batch_size);
    for (int j = 0; j < config_.batch_size; ++j) {
      const auto& s = samples[static_cast<std::size_t>(fit_rng.uniform_int(count))];
      batch.inputs.col(j) = s.features;
      batch.targets.col(j) = s.regrets / scale;
      batch.weights(j) = s.weight;
    }
    loss = config_.use_adam ? net.train_adam(batch, adam, config_.learning_rate)
                            : net.train_sgd(batch, config_.learning_rate);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("advantage training diverged at iteration " +
                               std::to_string(iteration_) + " for player " +
                               std::to_string(player));
    }
  }
  advantage_loss_[player] = loss;
}

Mlp DeepCfrSolver::fit_strategy(PlayerId player, Rng rng) const {
  Mlp net(strategy_spec(player), rng.next_u64());
  const auto& samples = strategy_buffers_[player].items();
  AdamState adam(net);
  const int count = static_cast<int>(samples.size());
  for (int step = 0; step < config_.strategy_train_steps; ++step) {
    TrainBatch batch;
    batch.inputs.resize(encoder_.size, config_.batch_size);
    batch.targets.resize(net.output_size(), config_.batch_size);
    batch.weights.resize(config_.batch_size);
    for (int j = 0; j < config_.batch_size; ++j) {
      const auto& s = samples[static_cast<std::size_t>(rng.uniform_int(count))];
      batch.inputs.col(j) = s.features;
      batch.targets.col(j) = s.probs;
      batch.weights(j) = s.weight;
    }
    const double loss = config_.use_adam ? net.train_adam(batch, adam, config_.learning_rate)
                                         : net.train_sgd(batch, config_.learning_rate);
    if (!std::isfinite(loss)) {
      throw std::runtime_error("strategy training diverged for player " +
                               std::to_string(player));
    }
  }
  return net;
}

void DeepCfrSolver::run_iteration() {
  iteration_ += 1;
  const double weight = static_cast<double>(iteration_);
  for (PlayerId p = 0; p < 2; ++p) {
    if (!learns(p)) continue;
    for (int i = 0; i < config_.traversals_per_iteration; ++i) {
      const auto root = game_->new_initial_state();
      traverse(*root, p, weight);
    }
  }
  for (PlayerId p = 0; p < 2; ++p) {
    if (learns(p)) fit_advantage(p);
  }
}

void DeepCfrSolver::solve() {
  while (iteration_ < config_.iterations) run_iteration();
}

double DeepCfrSolver::advantage_loss(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  return advantage_loss_[player];
}

std::size_t DeepCfrSolver::advantage_samples(PlayerId player) const {
  return advantage_buffers_.at(static_cast<std::size_t>(player)).size();
}

std::size_t DeepCfrSolver::strategy_samples(PlayerId player) const {
  return strategy_buffers_.at(static_cast<std::size_t>(player)).size();
}

const ReservoirBuffer<AdvantageSample>& DeepCfrSolver::advantage_buffer(
    PlayerId player) const {
  return advantage_buffers_.at(static_cast<std::size_t>(player));
}

const ReservoirBuffer<StrategySample>& DeepCfrSolver::strategy_buffer(
    PlayerId player) const {
  return strategy_buffers_.at(static_cast<std::size_t>(player));
}

const Mlp* DeepCfrSolver::advantage_net(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  return advantage_nets_[player].has_value() ? &*advantage_nets_[player] : nullptr;
}

std::shared_ptr<const Policy> DeepCfrSolver::current_policy() const {
  return std::make_shared<NetProfilePolicy>(fixed_, advantage_nets_, encoder_,
                                            /*regret_match=*/true);
}

std::shared_ptr<const Policy> DeepCfrSolver::average_policy() {
  std::array<std::optional<Mlp>, 2> nets;
  for (PlayerId p = 0; p < 2; ++p) {
    if (!learns(p) || strategy_buffers_[p].size() == 0) continue;
    Rng rng(mix_seed(config_.seed, 0x57a0u + 2u * static_cast<unsigned>(iteration_) +
                                       static_cast<unsigned>(p)));
    nets[p].emplace(fit_strategy(p, std::move(rng)));
  }
  return std::make_shared<NetProfilePolicy>(fixed_, std::move(nets), encoder_,
                                            /*regret_match=*/false);
}

}  // namespace jamlab
