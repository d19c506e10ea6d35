#include "jamlab/game.h"

#include <cmath>
#include <stdexcept>

namespace jamlab {

std::vector<std::pair<ActionId, double>> GameState::chance_outcomes() const {
  throw std::logic_error("chance_outcomes() called on a non-chance state");
}

std::unique_ptr<GameState> GameState::child(ActionId action) const {
  auto next = clone();
  next->apply_action(action);
  return next;
}

std::vector<double> UniformPolicy::action_probabilities(const GameState& state) const {
  const auto n = state.legal_actions().size();
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

std::vector<double> TabularPolicy::action_probabilities(const GameState& state) const {
  const auto key = state.info_state_key(state.current_player());
  if (const auto it = table_.find(key); it != table_.end()) return it->second;
  const auto n = state.legal_actions().size();
  return std::vector<double>(n, 1.0 / static_cast<double>(n));
}

void TabularPolicy::set(const InfoStateKey& key, std::vector<double> probs) {
  table_[key] = std::move(probs);
}

const std::vector<double>* TabularPolicy::find(const InfoStateKey& key) const {
  const auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

namespace {

double expected_utility_walk(const GameState& state, const Policy& p0,
                             const Policy& p1, PlayerId for_player) {
  if (state.is_terminal()) return state.returns()[for_player];
  if (state.is_chance()) {
    double total = 0.0;
    for (const auto& [action, prob] : state.chance_outcomes()) {
      total += prob * expected_utility_walk(*state.child(action), p0, p1, for_player);
    }
    return total;
  }
  const Policy& pol = state.current_player() == 0 ? p0 : p1;
  const auto probs = pol.action_probabilities(state);
  const auto actions = state.legal_actions();
  double total = 0.0;
  for (size_t i = 0; i < actions.size(); ++i) {
    if (probs[i] == 0.0) continue;
    total += probs[i] * expected_utility_walk(*state.child(actions[i]), p0, p1, for_player);
  }
  return total;
}

}  // namespace

double expected_utility(const Game& game, const Policy& p0, const Policy& p1,
                        PlayerId for_player) {
  return expected_utility_walk(*game.new_initial_state(), p0, p1, for_player);
}

namespace {

void enumerate_walk(const GameState& state, std::map<InfoStateKey, int>& out) {
  if (state.is_terminal()) return;
  if (state.is_chance()) {
    for (const auto& [action, prob] : state.chance_outcomes()) {
      enumerate_walk(*state.child(action), out);
    }
    return;
  }
  const auto actions = state.legal_actions();
  out.emplace(state.info_state_key(state.current_player()),
              static_cast<int>(actions.size()));
  for (const ActionId a : actions) enumerate_walk(*state.child(a), out);
}

std::uint64_t count_walk(const GameState& state) {
  std::uint64_t n = 1;
  if (state.is_terminal()) return n;
  if (state.is_chance()) {
    for (const auto& [action, prob] : state.chance_outcomes()) {
      n += count_walk(*state.child(action));
    }
    return n;
  }
  for (const ActionId a : state.legal_actions()) n += count_walk(*state.child(a));
  return n;
}

void validate_walk(const GameState& state, int num_players) {
  if (state.is_terminal()) {
    const auto u = state.returns();
    if (static_cast<int>(u.size()) != num_players) {
      throw std::logic_error("terminal returns size != num_players");
    }
    double sum = 0.0;
    for (const double v : u) sum += v;
    if (std::abs(sum) > 1e-12) throw std::logic_error("terminal returns not zero-sum");
    return;
  }
  if (state.is_chance()) {
    double mass = 0.0;
    for (const auto& [action, prob] : state.chance_outcomes()) {
      if (prob < 0.0) throw std::logic_error("negative chance probability");
      mass += prob;
      validate_walk(*state.child(action), num_players);
    }
    if (std::abs(mass - 1.0) > 1e-12) throw std::logic_error("chance outcomes do not sum to 1");
    return;
  }
  const auto actions = state.legal_actions();
  if (actions.empty()) throw std::logic_error("decision node with no legal actions");
  for (size_t i = 0; i < actions.size(); ++i) {
    if (actions[i] != static_cast<ActionId>(i)) {
      throw std::logic_error("legal actions are not the contiguous range 0..n-1");
    }
  }
  for (const ActionId a : actions) validate_walk(*state.child(a), num_players);
}

}  // namespace

std::map<InfoStateKey, int> enumerate_info_states(const Game& game) {
  std::map<InfoStateKey, int> out;
  enumerate_walk(*game.new_initial_state(), out);
  return out;
}

std::uint64_t count_histories(const Game& game) {
  return count_walk(*game.new_initial_state());
}

void validate_game(const Game& game) {
  validate_walk(*game.new_initial_state(), game.num_players());
}

}  // namespace jamlab
