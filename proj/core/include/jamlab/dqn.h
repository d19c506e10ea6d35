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

struct DqnConfig {
  int episodes = 20000;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int epsilon_decay_episodes = 10000;  // linear anneal, then flat
  std::vector<int> hidden = {128, 64};
  int replay_capacity = 1 << 15;
  int batch_size = 64;
  int learn_start = 256;        // stored transitions before training begins
  int train_every = 1;          // gradient-step cadence in stored transitions
  int target_sync_every = 250;  // in gradient steps
  double learning_rate = 0.01;
  double discount = 1.0;  // episodic game, reward only at the end
  bool use_adam = false;
  std::uint64_t seed = 1;
};

// One learner-side transition: the player's decision features, the action
// taken, and the player's next decision point (empty at terminal). Reward is
// the terminal utility on the closing transition and zero elsewhere.
struct DqnTransition {
  Eigen::VectorXd features;
  int action = 0;
  double reward = 0.0;
  Eigen::VectorXd next_features;
  bool terminal = false;
};

// Self-play DQN baseline: two independent epsilon-greedy learners (no
// parameter sharing), ring replay, periodically synced target networks.
// Either player can instead be pinned to a fixed policy. Convergence is not
// guaranteed in self-play; the contract is determinism per seed.
class DqnSolver {
 public:
  DqnSolver(std::shared_ptr<const Game> game, FeatureEncoder encoder, DqnConfig config);

  void set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy);
  void run_episode();
  void train();  // runs config.episodes episodes
  int episode() const { return episode_; }

  // Player-0 terminal utility of each completed episode.
  const std::vector<double>& episode_returns() const { return episode_returns_; }
  double epsilon() const;  // exploration rate for the upcoming episode
  double last_loss(PlayerId player) const;
  const RingReplay<DqnTransition>& replay(PlayerId player) const;
  const Mlp* q_net(PlayerId player) const;
  // Bellman target: reward, plus the discounted target-net maximum when the
  // transition is not terminal.
  double td_target(const DqnTransition& transition, PlayerId player) const;

  // Greedy argmax profile (fixed players keep their policy; players that
  // never acted fall back to uniform).
  std::shared_ptr<const Policy> greedy_policy() const;

 private:
  struct Pending {
    Eigen::VectorXd features;
    int action = 0;
  };

  bool learns(PlayerId player) const { return fixed_[player] == nullptr; }
  void ensure_net(PlayerId player, int num_actions);
  int greedy_action(const Mlp& net, const Eigen::VectorXd& features) const;
  void store(PlayerId player, DqnTransition transition);
  void train_step(PlayerId player);

  std::shared_ptr<const Game> game_;
  FeatureEncoder encoder_;
  DqnConfig config_;
  std::array<std::shared_ptr<const Policy>, 2> fixed_;
  std::array<std::optional<Mlp>, 2> q_nets_;
  std::array<std::optional<Mlp>, 2> target_nets_;
  std::array<std::optional<AdamState>, 2> adam_;
  std::vector<RingReplay<DqnTransition>> replays_;
  std::array<std::int64_t, 2> stored_{0, 0};
  std::array<std::int64_t, 2> steps_{0, 0};
  std::array<double, 2> last_loss_{0.0, 0.0};
  std::vector<double> episode_returns_;
  Rng rng_;
  int episode_ = 0;
};

}  // namespace jamlab
