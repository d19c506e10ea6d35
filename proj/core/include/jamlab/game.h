#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace jamlab {

using PlayerId = int;
using ActionId = int;

inline constexpr PlayerId kChancePlayer = -1;
inline constexpr PlayerId kTerminalPlayer = -2;

// Owning player plus a digest string unique within that player's partition.
// Digests are readable ASCII so they survive round trips through policy files.
struct InfoStateKey {
  PlayerId player = 0;
  std::string digest;

  friend bool operator==(const InfoStateKey&, const InfoStateKey&) = default;
  friend auto operator<=>(const InfoStateKey&, const InfoStateKey&) = default;
};

class GameState {
 public:
  virtual ~GameState() = default;
  virtual std::unique_ptr<GameState> clone() const = 0;

  virtual PlayerId current_player() const = 0;
  bool is_terminal() const { return current_player() == kTerminalPlayer; }
  bool is_chance() const { return current_player() == kChancePlayer; }

  // Actions are positions 0..n-1 into the acting player's current menu.
  virtual std::vector<ActionId> legal_actions() const = 0;
  // Only valid at chance nodes. Probabilities sum to 1.
  virtual std::vector<std::pair<ActionId, double>> chance_outcomes() const;
  virtual void apply_action(ActionId action) = 0;
  std::unique_ptr<GameState> child(ActionId action) const;

  // Per-player utilities. Only valid at terminals.
  virtual std::vector<double> returns() const = 0;
  virtual InfoStateKey info_state_key(PlayerId player) const = 0;
  virtual std::string to_string() const = 0;
};

class Game {
 public:
  virtual ~Game() = default;
  virtual std::unique_ptr<GameState> new_initial_state() const = 0;
  virtual int num_players() const { return 2; }
  // Exact terminal history count; tractability gates check this before
  // attempting whole-tree work.
  virtual std::uint64_t num_terminal_histories() const = 0;
  virtual std::string name() const = 0;
};

class Policy {
 public:
  virtual ~Policy() = default;
  // Distribution over state.legal_actions(), same order.
  virtual std::vector<double> action_probabilities(const GameState& state) const = 0;
};

class UniformPolicy final : public Policy {
 public:
  std::vector<double> action_probabilities(const GameState& state) const override;
};

// Map-backed policy. Unknown info states fall back to uniform so partially
// filled tables (e.g. truncated training runs) still define a full profile.
class TabularPolicy final : public Policy {
 public:
  std::vector<double> action_probabilities(const GameState& state) const override;
  void set(const InfoStateKey& key, std::vector<double> probs);
  const std::vector<double>* find(const InfoStateKey& key) const;
  const std::map<InfoStateKey, std::vector<double>>& table() const { return table_; }
  std::map<InfoStateKey, std::vector<double>>& table() { return table_; }

 private:
  std::map<InfoStateKey, std::vector<double>> table_;
};

// Exact expected utility for for_player under the profile (p0, p1).
// Walks the full tree; meant for games below the tabular gate.
double expected_utility(const Game& game, const Policy& p0, const Policy& p1,
                        PlayerId for_player);

// Every decision info state with its legal action count.
std::map<InfoStateKey, int> enumerate_info_states(const Game& game);

// All histories including chance nodes and terminals.
std::uint64_t count_histories(const Game& game);

// Walks the tree checking structural invariants: chance outcome probabilities
// sum to 1, terminal returns are zero-sum, legal action lists are the
// contiguous range 0..n-1. Throws std::logic_error on the first violation.
void validate_game(const Game& game);

}  // namespace jamlab
