#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "jamlab/game.h"
#include "jamlab/physics.h"

namespace jamlab {

// Scenario restrictions on the action menus. kFree leaves both menus full;
// kCaseA/kCaseB restrict the radar (same-frequency / all-distinct tuples) and
// pin its mixing distribution; kCaseC/kCaseD restrict the jammer to
// {Spot f0, Spot f1} / {React}.
enum class Scenario { kFree, kCaseA, kCaseB, kCaseC, kCaseD };

// Mixing weights for the case-a radar: uniform over the carriers, or
// proportional to 1/rcs so every carrier carries the same expected return
// energy. Uniform is the default.
enum class CaseAWeights { kUniform, kRcsInverse };

struct RadarGameConfig {
  int num_pulses = 4;     // M rounds, one pulse each
  int num_subpulses = 3;  // K subpulses per pulse
  int num_freqs = 3;      // N carriers
  Scenario scenario = Scenario::kFree;
  CaseAWeights case_a_weights = CaseAWeights::kUniform;
  PhysicsParams physics;  // physics.rcs must have num_freqs entries
};

struct JammerAction {
  enum Kind { kSpot, kReact, kBarrage };
  Kind kind = kSpot;
  int freq = 0;  // spot carrier; unused for React/Barrage

  std::string to_string() const;  // "S0".."S9", "Ra", "Ba"
  friend bool operator==(const JammerAction&, const JammerAction&) = default;
};

// Resolution of one round: which subpulses were hit and with what jam type.
struct RoundOutcome {
  std::vector<bool> jammed;
  std::vector<JamTag> tags;
};

class RadarJamState;

// M-round alternating game. Each round the radar commits a K-tuple of
// carriers, then the jammer acts without seeing that tuple; completed rounds
// are public. Terminal utility is (PD, -PD) where PD integrates every
// subpulse of every pulse coherently.
class RadarJamGame final : public Game,
                           public std::enable_shared_from_this<RadarJamGame> {
 public:
  static std::shared_ptr<const RadarJamGame> create(RadarGameConfig config);

  std::unique_ptr<GameState> new_initial_state() const override;
  std::uint64_t num_terminal_histories() const override;
  std::string name() const override { return "radar"; }

  const RadarGameConfig& config() const { return config_; }
  const RadarPhysics& physics() const { return physics_; }
  int num_pulses() const { return config_.num_pulses; }
  int num_subpulses() const { return config_.num_subpulses; }
  int num_freqs() const { return config_.num_freqs; }

  // Full-space tuple codec, independent of scenario restrictions: big-endian
  // base-N over the subpulse carriers, so (f0,f1,f2) <-> f0*N^2 + f1*N + f2.
  int encode_tuple(const std::vector<int>& tuple) const;
  std::vector<int> decode_tuple(int code) const;

  // Menus under the scenario. ActionIds are positions into these.
  const std::vector<int>& radar_menu() const { return radar_menu_; }
  const std::vector<JammerAction>& jammer_menu() const { return jammer_menu_; }
  const std::vector<int>& radar_tuple(ActionId action) const;

  RoundOutcome resolve_round(const std::vector<int>& tuple,
                             const JammerAction& jam) const;
  // Per-subpulse SINRs for one resolved round.
  std::vector<double> round_sinr(const std::vector<int>& tuple,
                                 const JammerAction& jam) const;
  // Cached sum of round_sinr over the round's subpulses, by menu position.
  double round_sinr_sum(ActionId radar_action, ActionId jammer_action) const;
  // PD for a full history of (radar action, jammer action) pairs.
  double terminal_pd(const std::vector<ActionId>& history) const;

  // Scenario-pinned behaviour. restricted_player() is the player whose menu
  // the scenario cut down; scenario_distribution() is the pinned (case a/b)
  // or baseline uniform (case c/d) mix over that player's menu.
  bool has_restricted_player() const { return config_.scenario != Scenario::kFree; }
  PlayerId restricted_player() const;
  std::vector<double> scenario_distribution() const;
  std::shared_ptr<const Policy> scenario_policy() const;

  // Whether any legal action can ever light up the cell (carrier freq,
  // subpulse k within a pulse) on the radar / jammer channel. Cells that
  // never can are permanent pads in the info-state tensor.
  bool radar_cell_possible(int freq, int k) const;
  bool jammer_cell_possible(int freq, int k) const;

 private:
  explicit RadarJamGame(RadarGameConfig config);
  void build_menus();
  void build_possible_cells();
  void build_round_sums();

  RadarGameConfig config_;
  RadarPhysics physics_;
  std::vector<int> radar_menu_;                 // codes
  std::vector<std::vector<int>> radar_tuples_;  // decoded menu entries
  std::vector<JammerAction> jammer_menu_;
  std::vector<std::vector<bool>> radar_possible_;   // [freq][k]
  std::vector<std::vector<bool>> jammer_possible_;  // [freq][k]
  std::vector<double> round_sums_;  // [radar action * |jammer menu| + jam action]
};

class RadarJamState final : public GameState {
 public:
  explicit RadarJamState(std::shared_ptr<const RadarJamGame> game);

  std::unique_ptr<GameState> clone() const override;
  PlayerId current_player() const override;
  std::vector<ActionId> legal_actions() const override;
  void apply_action(ActionId action) override;
  std::vector<double> returns() const override;
  InfoStateKey info_state_key(PlayerId player) const override;
  std::string to_string() const override;

  const RadarJamGame& game() const { return *game_; }
  const std::vector<ActionId>& history() const { return history_; }
  int round() const { return static_cast<int>(history_.size()) / 2; }
  // True if `round` (0-based) has a radar move `player` is allowed to see.
  bool radar_move_visible(PlayerId player, int round_index) const;

 private:
  std::shared_ptr<const RadarJamGame> game_;
  std::vector<ActionId> history_;
};

}  // namespace jamlab
