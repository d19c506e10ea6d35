#include "jamlab/best_response.h"

#include <unordered_map>

namespace jamlab {
namespace {

struct HistoryHash {
  size_t operator()(const std::vector<ActionId>& h) const {
    size_t x = 1469598103934665603ull;
    for (const ActionId a : h) {
      x ^= static_cast<size_t>(a) + 0x9e3779b97f4a7c15ull;
      x *= 1099511628211ull;
    }
    return x;
  }
};

class BrComputer {
 public:
  BrComputer(const Game& game, PlayerId br_player, const Policy& opponent)
      : game_(game), br_(br_player), opponent_(opponent) {
    std::vector<ActionId> hist;
    collect(*game_.new_initial_state(), hist, 1.0);
  }

  double root_value() {
    std::vector<ActionId> hist;
    return value(*game_.new_initial_state(), hist);
  }

  const std::map<InfoStateKey, ActionId>& choices() const { return choice_; }

 private:
  // Bucket each br-player decision history with its opponent+chance reach.
  void collect(const GameState& state, std::vector<ActionId>& hist, double opp_reach) {
    if (state.is_terminal()) return;
    if (state.is_chance()) {
      for (const auto& [action, prob] : state.chance_outcomes()) {
        hist.push_back(action);
        collect(*state.child(action), hist, opp_reach * prob);
        hist.pop_back();
      }
      return;
    }
    const auto actions = state.legal_actions();
    if (state.current_player() == br_) {
      buckets_[state.info_state_key(br_)].emplace_back(hist, opp_reach);
      for (const ActionId a : actions) {
        hist.push_back(a);
        collect(*state.child(a), hist, opp_reach);
        hist.pop_back();
      }
    } else {
      const auto probs = opponent_.action_probabilities(state);
      for (size_t i = 0; i < actions.size(); ++i) {
        hist.push_back(actions[i]);
        collect(*state.child(actions[i]), hist, opp_reach * probs[i]);
        hist.pop_back();
      }
    }
  }

  std::unique_ptr<GameState> replay(const std::vector<ActionId>& hist) const {
    auto state = game_.new_initial_state();
    for (const ActionId a : hist) state->apply_action(a);
    return state;
  }

  // Value for br_player when br plays the (lazily resolved) best response and
  // the opponent plays its policy, below the given history.
  double value(const GameState& state, std::vector<ActionId>& hist) {
    if (state.is_terminal()) return state.returns()[br_];
    if (const auto it = value_memo_.find(hist); it != value_memo_.end()) return it->second;

    double out = 0.0;
    if (state.is_chance()) {
      for (const auto& [action, prob] : state.chance_outcomes()) {
        hist.push_back(action);
        out += prob * value(*state.child(action), hist);
        hist.pop_back();
      }
    } else if (state.current_player() == br_) {
      const ActionId best = best_action(state.info_state_key(br_));
      hist.push_back(best);
      out = value(*state.child(best), hist);
      hist.pop_back();
    } else {
      const auto probs = opponent_.action_probabilities(state);
      const auto actions = state.legal_actions();
      for (size_t i = 0; i < actions.size(); ++i) {
        if (probs[i] == 0.0) continue;
        hist.push_back(actions[i]);
        out += probs[i] * value(*state.child(actions[i]), hist);
        hist.pop_back();
      }
    }
    value_memo_.emplace(hist, out);
    return out;
  }

  ActionId best_action(const InfoStateKey& key) {
    if (const auto it = choice_.find(key); it != choice_.end()) return it->second;
    const auto& bucket = buckets_.at(key);
    ActionId best = 0;
    double best_q = 0.0;
    bool first = true;
    // One action menu per info state; take it from the first history.
    const auto menu = replay(bucket.front().first)->legal_actions();
    for (const ActionId a : menu) {
      double q = 0.0;
      for (const auto& [hist, weight] : bucket) {
        if (weight == 0.0) continue;
        auto h = hist;
        h.push_back(a);
        q += weight * value(*replay(h), h);
      }
      if (first || q > best_q) {
        best = a;
        best_q = q;
        first = false;
      }
    }
    choice_.emplace(key, best);
    return best;
  }

  const Game& game_;
  PlayerId br_;
  const Policy& opponent_;
  std::map<InfoStateKey, std::vector<std::pair<std::vector<ActionId>, double>>> buckets_;
  std::map<InfoStateKey, ActionId> choice_;
  std::unordered_map<std::vector<ActionId>, double, HistoryHash> value_memo_;
};

}  // namespace

double best_response_value(const Game& game, PlayerId br_player, const Policy& opponent) {
  return BrComputer(game, br_player, opponent).root_value();
}

TabularPolicy best_response_policy(const Game& game, PlayerId br_player,
                                   const Policy& opponent, double* value) {
  BrComputer computer(game, br_player, opponent);
  const double v = computer.root_value();
  if (value != nullptr) *value = v;
  TabularPolicy policy;
  for (const auto& [key, n_actions] : enumerate_info_states(game)) {
    if (key.player != br_player) continue;
    std::vector<double> probs(n_actions, 0.0);
    if (const auto it = computer.choices().find(key); it != computer.choices().end()) {
      probs[it->second] = 1.0;
    } else {
      // Never visited while resolving the root value; any play is fine.
      for (auto& p : probs) p = 1.0 / n_actions;
    }
    policy.set(key, std::move(probs));
  }
  return policy;
}

double exploitability(const Game& game, const Policy& p0, const Policy& p1) {
  const double br0 = best_response_value(game, 0, p1);
  const double br1 = best_response_value(game, 1, p0);
  return 0.5 * (br0 + br1);
}

}  // namespace jamlab
