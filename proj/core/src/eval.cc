#include "jamlab/eval.h"

#include <cmath>
#include <stdexcept>

#include "jamlab/rng.h"

namespace jamlab {

double exact_value(const Game& game, const Policy& p0, const Policy& p1) {
  return expected_utility(game, p0, p1, 0);
}

SampledValue sampled_value(const Game& game, const Policy& p0, const Policy& p1,
                           int episodes, std::uint64_t seed) {
  if (episodes <= 0) throw std::invalid_argument("episodes must be positive");
  Rng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (int e = 0; e < episodes; ++e) {
    auto state = game.new_initial_state();
    while (!state->is_terminal()) {
      if (state->is_chance()) {
        const auto outcomes = state->chance_outcomes();
        std::vector<double> probs;
        probs.reserve(outcomes.size());
        for (const auto& [action, prob] : outcomes) probs.push_back(prob);
        state->apply_action(outcomes[rng.sample_discrete(probs)].first);
        continue;
      }
      const auto legal = state->legal_actions();
      const Policy& policy = state->current_player() == 0 ? p0 : p1;
      const auto probs = policy.action_probabilities(*state);
      state->apply_action(legal[rng.sample_discrete(probs)]);
    }
    const double u = state->returns()[0];
    const double delta = u - mean;
    mean += delta / static_cast<double>(e + 1);
    m2 += delta * (u - mean);
  }
  SampledValue out;
  out.mean = mean;
  out.episodes = episodes;
  if (episodes > 1) {
    const double variance = m2 / static_cast<double>(episodes - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(episodes));
  }
  return out;
}

namespace {

void tabularize_walk(const GameState& state, const Policy& policy, TabularPolicy& out) {
  if (state.is_terminal()) return;
  if (state.is_chance()) {
    for (const auto& [action, prob] : state.chance_outcomes()) {
      const auto child = state.child(action);
      tabularize_walk(*child, policy, out);
    }
    return;
  }
  const auto key = state.info_state_key(state.current_player());
  if (out.find(key) == nullptr) {
    out.set(key, policy.action_probabilities(state));
  }
  for (const ActionId action : state.legal_actions()) {
    const auto child = state.child(action);
    tabularize_walk(*child, policy, out);
  }
}

}  // namespace

TabularPolicy tabularize(const Game& game, const Policy& policy) {
  TabularPolicy out;
  const auto root = game.new_initial_state();
  tabularize_walk(*root, policy, out);
  return out;
}

}  // namespace jamlab
