#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "jamlab/game.h"

namespace jamlab {

struct CfrOptions {
  // Strategy averaging weight per iteration: classic (every iteration counts
  // once) or linear (iteration t counts t times).
  bool linear_averaging = false;
  // Refuse trees with more terminal histories than this. Vanilla CFR walks
  // the whole tree every iteration; past a few million histories that is the
  // wrong tool and the sampling solvers should be used instead.
  std::uint64_t history_gate = 5'000'000;
};

// Positive-part-proportional distribution over actions; uniform when no
// regret is positive.
std::vector<double> regret_matching(const std::vector<double>& regrets);

// Vanilla counterfactual regret minimization with regret matching.
// Both players' regrets are updated from the same traversal (simultaneous
// updates). A player can instead be pinned to a fixed policy, in which case
// only the other player learns.
//
// The game tree is compiled to flat arrays on the first iteration: terminal
// utilities, chance probabilities and fixed-player probabilities are cached
// once, so iterating never touches GameState again.
class CfrSolver {
 public:
  CfrSolver(const Game& game, CfrOptions options = {});

  void set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy);
  void run_iteration();
  void run_iterations(int n);
  int iteration() const { return iteration_; }

  // Average (reach-weighted) strategy: the iterate that converges to
  // equilibrium. Falls back to uniform where nothing accumulated.
  TabularPolicy average_policy() const;
  // Current regret-matching strategy.
  TabularPolicy current_policy() const;

 private:
  enum class NodeKind : std::uint8_t { kDecision, kChance, kTerminal };

  struct InfoSet {
    InfoStateKey key;
    std::vector<double> regret_sum;
    std::vector<double> strategy_sum;
  };

  struct TreeNode {
    NodeKind kind = NodeKind::kTerminal;
    PlayerId player = kTerminalPlayer;
    std::int32_t infoset = -1;  // -1 at chance/terminal/fixed-player nodes
    std::int32_t first_edge = 0;
    std::int32_t num_edges = 0;
    double terminal_u0 = 0.0;
  };

  void compile();
  void matched_probs(const InfoSet& set, double* probs) const;
  double walk(std::int32_t node_index, double reach0, double reach1,
              double reach_chance, int depth);

  const Game& game_;
  CfrOptions options_;
  std::array<std::shared_ptr<const Policy>, 2> fixed_;

  bool compiled_ = false;
  std::vector<TreeNode> tree_;
  std::vector<std::int32_t> edge_child_;
  std::vector<double> edge_prob_;  // chance and fixed-player edges only
  std::vector<InfoSet> infosets_;
  std::vector<std::vector<double>> scratch_probs_;  // per depth
  std::vector<std::vector<double>> scratch_values_;
  int iteration_ = 0;
};

}  // namespace jamlab
