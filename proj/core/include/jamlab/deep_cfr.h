#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "jamlab/features.h"
#include "jamlab/game.h"
#include "jamlab/mlp.h"
#include "jamlab/replay.h"
#include "jamlab/rng.h"

namespace jamlab {

struct DeepCfrConfig {
  int iterations = 20;
  int traversals_per_iteration = 256;  // per learning player
  std::vector<int> advantage_hidden = {128, 64};
  std::vector<int> strategy_hidden = {128, 64};
  int advantage_capacity = 1 << 16;
  int strategy_capacity = 1 << 16;
  int advantage_train_steps = 300;
  int strategy_train_steps = 1000;
  int batch_size = 128;
  double learning_rate = 0.01;
  bool use_adam = false;  // SGD is the baseline contract
  std::uint64_t seed = 1;
};

// Training sample at one of the traverser's states: features, estimated
// instantaneous regret per action, and the iteration stamp used as the
// averaging weight.
struct AdvantageSample {
  Eigen::VectorXd features;
  Eigen::VectorXd regrets;
  double weight = 1.0;
};

// Behavior recorded at a non-traverser state: the regret-matched distribution
// actually played, soft-target for the strategy net.
struct StrategySample {
  Eigen::VectorXd features;
  Eigen::VectorXd probs;
  double weight = 1.0;
};

// Renormalizes a nonnegative network output over the legal actions; uniform
// fallback when the legal mass is below 1e-12.
std::vector<double> masked_policy(const Eigen::VectorXd& output,
                                  const std::vector<ActionId>& legal);
std::vector<double> evaluate_policy_net(const Mlp& net, const FeatureEncoder& encoder,
                                        const GameState& state);

// Deep CFR: external-sampling traversals (the traverser expands every action,
// the opponent and chance are sampled), per-player advantage networks
// retrained from scratch each iteration on reservoir-sampled regrets, and
// per-player strategy networks fit to the accumulated behavior. Players can
// be pinned to fixed policies; pinned players are sampled but never learn.
// Assumes each player's legal action count is constant across their states,
// which holds for the games in this repository.
class DeepCfrSolver {
 public:
  DeepCfrSolver(std::shared_ptr<const Game> game, FeatureEncoder encoder,
                DeepCfrConfig config);

  void set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy);
  void run_iteration();
  void solve();  // runs config.iterations iterations
  int iteration() const { return iteration_; }

  // Final-step training loss of the most recent advantage fit.
  double advantage_loss(PlayerId player) const;
  std::size_t advantage_samples(PlayerId player) const;
  std::size_t strategy_samples(PlayerId player) const;
  const ReservoirBuffer<AdvantageSample>& advantage_buffer(PlayerId player) const;
  const ReservoirBuffer<StrategySample>& strategy_buffer(PlayerId player) const;
  const Mlp* advantage_net(PlayerId player) const;

  // Current regret-matched behavior (advantage nets), mostly a diagnostic.
  std::shared_ptr<const Policy> current_policy() const;
  // The solver's output: strategy networks fit to the behavior buffers,
  // wrapped as a profile. Pinned players keep their fixed policy; players
  // with no recorded behavior fall back to uniform.
  std::shared_ptr<const Policy> average_policy();

 private:
  MlpSpec advantage_spec(PlayerId player) const;
  MlpSpec strategy_spec(PlayerId player) const;
  std::vector<double> behavior_probs(PlayerId player, const GameState& state) const;
  double traverse(const GameState& state, PlayerId traverser, double weight);
  void fit_advantage(PlayerId player);
  Mlp fit_strategy(PlayerId player, Rng rng) const;
  bool learns(PlayerId player) const { return fixed_[player] == nullptr; }
  int action_count(PlayerId player) const;

  std::shared_ptr<const Game> game_;
  FeatureEncoder encoder_;
  DeepCfrConfig config_;
  std::array<std::shared_ptr<const Policy>, 2> fixed_;
  mutable std::array<int, 2> action_count_{-1, -1};
  std::array<std::optional<Mlp>, 2> advantage_nets_;
  std::array<double, 2> advantage_loss_{0.0, 0.0};
  std::vector<ReservoirBuffer<AdvantageSample>> advantage_buffers_;
  std::vector<ReservoirBuffer<StrategySample>> strategy_buffers_;
  Rng rng_;
  int iteration_ = 0;
};

}  // namespace jamlab
