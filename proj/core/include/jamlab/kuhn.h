#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jamlab/game.h"

namespace jamlab {

// Three-card Kuhn poker. Cards 0 < 1 < 2, one each to P0 and P1 via a single
// chance node with six equally likely deals. Actions: 0 = pass (check/fold),
// 1 = bet (bet/call). Standard solver test fixture: the equilibrium value for
// P0 is -1/18.
class KuhnGame final : public Game {
 public:
  std::unique_ptr<GameState> new_initial_state() const override;
  std::uint64_t num_terminal_histories() const override { return 30; }
  std::string name() const override { return "kuhn"; }
};

class KuhnState final : public GameState {
 public:
  KuhnState() = default;

  std::unique_ptr<GameState> clone() const override;
  PlayerId current_player() const override;
  std::vector<ActionId> legal_actions() const override;
  std::vector<std::pair<ActionId, double>> chance_outcomes() const override;
  void apply_action(ActionId action) override;
  std::vector<double> returns() const override;
  InfoStateKey info_state_key(PlayerId player) const override;
  std::string to_string() const override;

 private:
  bool betting_over() const;

  int deal_ = -1;          // chance outcome index, -1 before the deal
  std::string bets_;       // 'p' / 'b' per betting action
};

}  // namespace jamlab
