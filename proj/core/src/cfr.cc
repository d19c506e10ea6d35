#include "jamlab/cfr.h"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace jamlab {

std::vector<double> regret_matching(const std::vector<double>& regrets) {
  if (regrets.empty()) throw std::invalid_argument("regret_matching with no actions");
  std::vector<double> probs(regrets.size());
  double positive = 0.0;
  for (const double r : regrets) positive += r > 0.0 ? r : 0.0;
  if (positive > 0.0) {
    for (std::size_t i = 0; i < regrets.size(); ++i) {
      probs[i] = regrets[i] > 0.0 ? regrets[i] / positive : 0.0;
    }
  } else {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(regrets.size()));
  }
  return probs;
}

CfrSolver::CfrSolver(const Game& game, CfrOptions options)
    : game_(game), options_(options) {
  const auto terminals = game.num_terminal_histories();
  if (terminals > options_.history_gate) {
    throw std::runtime_error(
        "tabular CFR refused: " + game.name() + " has " +
        std::to_string(terminals) + " terminal histories, gate is " +
        std::to_string(options_.history_gate) +
        " (use a sampling solver for games this size)");
  }
}

void CfrSolver::set_fixed_policy(PlayerId player, std::shared_ptr<const Policy> policy) {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  if (compiled_) throw std::logic_error("fix policies before iterating");
  fixed_[player] = std::move(policy);
}

void CfrSolver::compile() {
  std::map<InfoStateKey, std::int32_t> index_of;
  std::size_t max_actions = 1;
  int max_depth = 0;

  auto rec = [&](auto&& self, const GameState& state, int depth) -> std::int32_t {
    max_depth = std::max(max_depth, depth);
    const auto index = static_cast<std::int32_t>(tree_.size());
    tree_.emplace_back();

    TreeNode node;
    if (state.is_terminal()) {
      node.kind = NodeKind::kTerminal;
      node.terminal_u0 = state.returns()[0];
      tree_[static_cast<std::size_t>(index)] = node;
      return index;
    }

    std::vector<std::int32_t> children;
    std::vector<double> probs;
    if (state.is_chance()) {
      node.kind = NodeKind::kChance;
      node.player = kChancePlayer;
      for (const auto& [action, prob] : state.chance_outcomes()) {
        const auto child = state.child(action);
        children.push_back(self(self, *child, depth + 1));
        probs.push_back(prob);
      }
    } else {
      const PlayerId player = state.current_player();
      const auto actions = state.legal_actions();
      node.kind = NodeKind::kDecision;
      node.player = player;
      max_actions = std::max(max_actions, actions.size());
      if (fixed_[player] != nullptr) {
        probs = fixed_[player]->action_probabilities(state);
        if (probs.size() != actions.size()) {
          throw std::logic_error("fixed policy size mismatch at " +
                                 state.info_state_key(player).digest);
        }
      } else {
        const auto key = state.info_state_key(player);
        auto [it, inserted] = index_of.try_emplace(
            key, static_cast<std::int32_t>(infosets_.size()));
        if (inserted) {
          InfoSet set;
          set.key = key;
          set.regret_sum.assign(actions.size(), 0.0);
          set.strategy_sum.assign(actions.size(), 0.0);
          infosets_.push_back(std::move(set));
        } else if (infosets_[static_cast<std::size_t>(it->second)]
                       .regret_sum.size() != actions.size()) {
          throw std::logic_error("legal action count differs within info state " +
                                 key.digest);
        }
        node.infoset = it->second;
      }
      for (const ActionId action : actions) {
        const auto child = state.child(action);
        children.push_back(self(self, *child, depth + 1));
      }
    }

    node.first_edge = static_cast<std::int32_t>(edge_child_.size());
    node.num_edges = static_cast<std::int32_t>(children.size());
    edge_child_.insert(edge_child_.end(), children.begin(), children.end());
    edge_prob_.resize(edge_child_.size(), 0.0);
    for (std::size_t i = 0; i < probs.size(); ++i) {
      edge_prob_[static_cast<std::size_t>(node.first_edge) + i] = probs[i];
    }
    tree_[static_cast<std::size_t>(index)] = node;
    return index;
  };

  const auto root = game_.new_initial_state();
  rec(rec, *root, 0);
  scratch_probs_.assign(static_cast<std::size_t>(max_depth) + 1,
                        std::vector<double>(max_actions, 0.0));
  scratch_values_ = scratch_probs_;
  compiled_ = true;
}

void CfrSolver::matched_probs(const InfoSet& set, double* probs) const {
  const std::size_t n = set.regret_sum.size();
  double positive = 0.0;
  for (const double r : set.regret_sum) positive += r > 0.0 ? r : 0.0;
  if (positive > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = set.regret_sum[i];
      probs[i] = r > 0.0 ? r / positive : 0.0;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) probs[i] = 1.0 / static_cast<double>(n);
  }
}

double CfrSolver::walk(std::int32_t node_index, double reach0, double reach1,
                       double reach_chance, int depth) {
  const TreeNode& node = tree_[static_cast<std::size_t>(node_index)];
  if (node.kind == NodeKind::kTerminal) return node.terminal_u0;

  const auto first = static_cast<std::size_t>(node.first_edge);
  const int n = node.num_edges;

  if (node.kind == NodeKind::kChance) {
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = edge_prob_[first + static_cast<std::size_t>(i)];
      if (p == 0.0) continue;
      value += p * walk(edge_child_[first + static_cast<std::size_t>(i)], reach0,
                        reach1, reach_chance * p, depth + 1);
    }
    return value;
  }

  const PlayerId player = node.player;
  if (node.infoset < 0) {  // pinned player, probabilities baked at compile
    double value = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = edge_prob_[first + static_cast<std::size_t>(i)];
      if (p == 0.0) continue;
      value += p * walk(edge_child_[first + static_cast<std::size_t>(i)],
                        player == 0 ? reach0 * p : reach0,
                        player == 1 ? reach1 * p : reach1, reach_chance, depth + 1);
    }
    return value;
  }

  InfoSet& set = infosets_[static_cast<std::size_t>(node.infoset)];
  double* probs = scratch_probs_[static_cast<std::size_t>(depth)].data();
  double* values = scratch_values_[static_cast<std::size_t>(depth)].data();
  matched_probs(set, probs);

  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = probs[i];
    values[i] = walk(edge_child_[first + static_cast<std::size_t>(i)],
                     player == 0 ? reach0 * p : reach0,
                     player == 1 ? reach1 * p : reach1, reach_chance, depth + 1);
    value += p * values[i];
  }

  const double own_reach = player == 0 ? reach0 : reach1;
  const double cf_reach = (player == 0 ? reach1 : reach0) * reach_chance;
  const double sign = player == 0 ? 1.0 : -1.0;
  const double avg_weight =
      options_.linear_averaging ? static_cast<double>(iteration_ + 1) : 1.0;
  for (int i = 0; i < n; ++i) {
    set.regret_sum[static_cast<std::size_t>(i)] +=
        cf_reach * sign * (values[i] - value);
    set.strategy_sum[static_cast<std::size_t>(i)] +=
        avg_weight * own_reach * probs[i];
  }
  return value;
}

void CfrSolver::run_iteration() {
  if (!compiled_) compile();
  walk(0, 1.0, 1.0, 1.0, 0);
  ++iteration_;
}

void CfrSolver::run_iterations(int n) {
  for (int i = 0; i < n; ++i) run_iteration();
}

TabularPolicy CfrSolver::average_policy() const {
  TabularPolicy policy;
  for (const auto& set : infosets_) {
    double total = 0.0;
    for (const double s : set.strategy_sum) total += s;
    std::vector<double> probs(set.strategy_sum.size());
    if (total > 0.0) {
      for (std::size_t i = 0; i < probs.size(); ++i) {
        probs[i] = set.strategy_sum[i] / total;
      }
    } else {
      for (auto& p : probs) p = 1.0 / static_cast<double>(probs.size());
    }
    policy.set(set.key, std::move(probs));
  }
  return policy;
}

TabularPolicy CfrSolver::current_policy() const {
  TabularPolicy policy;
  std::vector<double> probs;
  for (const auto& set : infosets_) {
    probs.assign(set.regret_sum.size(), 0.0);
    matched_probs(set, probs.data());
    policy.set(set.key, probs);
  }
  return policy;
}

}  // namespace jamlab
