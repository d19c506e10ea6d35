#include "jamlab/radar_game.h"

#include <algorithm>
#include <stdexcept>

namespace jamlab {

std::string JammerAction::to_string() const {
  switch (kind) {
    case kSpot: return "S" + std::to_string(freq);
    case kReact: return "Ra";
    case kBarrage: return "Ba";
  }
  throw std::logic_error("bad JammerAction kind");
}

RadarJamGame::RadarJamGame(RadarGameConfig config)
    : config_(std::move(config)), physics_(config_.physics) {
  const auto& c = config_;
  if (c.num_pulses < 1) throw std::invalid_argument("num_pulses must be >= 1");
  if (c.num_subpulses < 1) throw std::invalid_argument("num_subpulses must be >= 1");
  if (c.num_freqs < 2) throw std::invalid_argument("num_freqs must be >= 2");
  if (static_cast<int>(c.physics.rcs.size()) != c.num_freqs) {
    throw std::invalid_argument("physics.rcs must have num_freqs entries");
  }
  if (c.scenario == Scenario::kCaseB && c.num_freqs < c.num_subpulses) {
    throw std::invalid_argument("case b needs num_freqs >= num_subpulses");
  }
  build_menus();
  build_possible_cells();
  build_round_sums();
}

std::shared_ptr<const RadarJamGame> RadarJamGame::create(RadarGameConfig config) {
  return std::shared_ptr<const RadarJamGame>(new RadarJamGame(std::move(config)));
}

int RadarJamGame::encode_tuple(const std::vector<int>& tuple) const {
  if (static_cast<int>(tuple.size()) != config_.num_subpulses) {
    throw std::invalid_argument("tuple length != num_subpulses");
  }
  int code = 0;
  for (const int f : tuple) {
    if (f < 0 || f >= config_.num_freqs) throw std::out_of_range("bad carrier in tuple");
    code = code * config_.num_freqs + f;
  }
  return code;
}

std::vector<int> RadarJamGame::decode_tuple(int code) const {
  if (code < 0) throw std::out_of_range("tuple code out of range");
  const int k = config_.num_subpulses;
  const int n = config_.num_freqs;
  std::vector<int> tuple(k);
  for (int i = k - 1; i >= 0; --i) {
    tuple[i] = code % n;
    code /= n;
  }
  if (code != 0) throw std::out_of_range("tuple code out of range");
  return tuple;
}

void RadarJamGame::build_menus() {
  const int n = config_.num_freqs;
  const int k = config_.num_subpulses;
  int full = 1;
  for (int i = 0; i < k; ++i) full *= n;

  switch (config_.scenario) {
    case Scenario::kCaseA:
      // Same carrier on every subpulse.
      for (int f = 0; f < n; ++f) {
        radar_menu_.push_back(encode_tuple(std::vector<int>(k, f)));
      }
      break;
    case Scenario::kCaseB:
      // All-distinct carriers, in code order.
      for (int code = 0; code < full; ++code) {
        auto t = decode_tuple(code);
        auto s = t;
        std::sort(s.begin(), s.end());
        if (std::adjacent_find(s.begin(), s.end()) == s.end()) {
          radar_menu_.push_back(code);
        }
      }
      break;
    default:
      for (int code = 0; code < full; ++code) radar_menu_.push_back(code);
      break;
  }
  for (const int code : radar_menu_) radar_tuples_.push_back(decode_tuple(code));

  switch (config_.scenario) {
    case Scenario::kCaseC:
      jammer_menu_.push_back({JammerAction::kSpot, 0});
      jammer_menu_.push_back({JammerAction::kSpot, 1});
      break;
    case Scenario::kCaseD:
      jammer_menu_.push_back({JammerAction::kReact, 0});
      break;
    default:
      for (int f = 0; f < n; ++f) jammer_menu_.push_back({JammerAction::kSpot, f});
      jammer_menu_.push_back({JammerAction::kReact, 0});
      jammer_menu_.push_back({JammerAction::kBarrage, 0});
      break;
  }
  if (config_.scenario == Scenario::kCaseC && n < 2) {
    throw std::invalid_argument("case c needs at least two carriers");
  }
}

void RadarJamGame::build_possible_cells() {
  const int n = config_.num_freqs;
  const int k = config_.num_subpulses;
  radar_possible_.assign(n, std::vector<bool>(k, false));
  jammer_possible_.assign(n, std::vector<bool>(k, false));
  for (const auto& tuple : radar_tuples_) {
    for (int i = 0; i < k; ++i) radar_possible_[tuple[i]][i] = true;
  }
  for (const auto& jam : jammer_menu_) {
    switch (jam.kind) {
      case JammerAction::kSpot:
        for (int i = 0; i < k; ++i) jammer_possible_[jam.freq][i] = true;
        break;
      case JammerAction::kBarrage:
        for (int f = 0; f < n; ++f) {
          for (int i = 0; i < k; ++i) jammer_possible_[f][i] = true;
        }
        break;
      case JammerAction::kReact:
        // Emits on whatever carrier it intercepts, from the second subpulse on.
        for (const auto& tuple : radar_tuples_) {
          for (int i = 1; i < k; ++i) jammer_possible_[tuple[0]][i] = true;
        }
        break;
    }
  }
}

std::unique_ptr<GameState> RadarJamGame::new_initial_state() const {
  return std::make_unique<RadarJamState>(shared_from_this());
}

std::uint64_t RadarJamGame::num_terminal_histories() const {
  const std::uint64_t per_round =
      static_cast<std::uint64_t>(radar_menu_.size()) * jammer_menu_.size();
  std::uint64_t total = 1;
  for (int m = 0; m < config_.num_pulses; ++m) {
    if (total > UINT64_MAX / per_round) throw std::overflow_error("history count overflow");
    total *= per_round;
  }
  return total;
}

const std::vector<int>& RadarJamGame::radar_tuple(ActionId action) const {
  if (action < 0 || action >= static_cast<ActionId>(radar_tuples_.size())) {
    throw std::out_of_range("bad radar action");
  }
  return radar_tuples_[action];
}

RoundOutcome RadarJamGame::resolve_round(const std::vector<int>& tuple,
                                         const JammerAction& jam) const {
  const int k = config_.num_subpulses;
  RoundOutcome out;
  out.jammed.assign(k, false);
  out.tags.assign(k, JamTag::kNone);
  for (int i = 0; i < k; ++i) {
    switch (jam.kind) {
      case JammerAction::kSpot:
        if (tuple[i] == jam.freq) {
          out.jammed[i] = true;
          out.tags[i] = JamTag::kSpot;
        }
        break;
      case JammerAction::kBarrage:
        out.jammed[i] = true;
        out.tags[i] = JamTag::kBarrage;
        break;
      case JammerAction::kReact:
        // Needs the first subpulse to intercept, so it can only hit later
        // subpulses that reuse the intercepted carrier.
        if (i >= 1 && tuple[i] == tuple[0]) {
          out.jammed[i] = true;
          out.tags[i] = JamTag::kSpot;
        }
        break;
    }
  }
  return out;
}

std::vector<double> RadarJamGame::round_sinr(const std::vector<int>& tuple,
                                             const JammerAction& jam) const {
  const auto outcome = resolve_round(tuple, jam);
  std::vector<double> sinr(tuple.size());
  for (size_t i = 0; i < tuple.size(); ++i) {
    sinr[i] = physics_.cell_sinr(tuple[i], outcome.tags[i]);
  }
  return sinr;
}

void RadarJamGame::build_round_sums() {
  round_sums_.reserve(radar_menu_.size() * jammer_menu_.size());
  for (const auto& tuple : radar_tuples_) {
    for (const auto& jam : jammer_menu_) {
      const auto cells = round_sinr(tuple, jam);
      double total = 0.0;
      for (const double c : cells) total += c;
      round_sums_.push_back(total);
    }
  }
}

double RadarJamGame::round_sinr_sum(ActionId radar_action, ActionId jammer_action) const {
  if (radar_action < 0 || radar_action >= static_cast<ActionId>(radar_menu_.size())) {
    throw std::out_of_range("bad radar action");
  }
  if (jammer_action < 0 || jammer_action >= static_cast<ActionId>(jammer_menu_.size())) {
    throw std::out_of_range("bad jammer action");
  }
  return round_sums_[static_cast<size_t>(radar_action) * jammer_menu_.size() +
                     static_cast<size_t>(jammer_action)];
}

double RadarJamGame::terminal_pd(const std::vector<ActionId>& history) const {
  if (static_cast<int>(history.size()) != 2 * config_.num_pulses) {
    throw std::invalid_argument("terminal_pd needs a full history");
  }
  double effective = 0.0;
  for (int m = 0; m < config_.num_pulses; ++m) {
    effective += round_sinr_sum(history[2 * m], history[2 * m + 1]);
  }
  return physics_.probability_of_detection(effective);
}

PlayerId RadarJamGame::restricted_player() const {
  switch (config_.scenario) {
    case Scenario::kCaseA:
    case Scenario::kCaseB:
      return 0;
    case Scenario::kCaseC:
    case Scenario::kCaseD:
      return 1;
    default:
      throw std::logic_error("free scenario has no restricted player");
  }
}

std::vector<double> RadarJamGame::scenario_distribution() const {
  const size_t n = restricted_player() == 0 ? radar_menu_.size() : jammer_menu_.size();
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  if (config_.scenario == Scenario::kCaseA &&
      config_.case_a_weights == CaseAWeights::kRcsInverse) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      probs[i] = 1.0 / config_.physics.rcs[radar_tuples_[i][0]];
      total += probs[i];
    }
    for (auto& p : probs) p /= total;
  }
  return probs;
}

namespace {

// Fixed marginal over the restricted player's menu, every round.
class ScenarioPolicy final : public Policy {
 public:
  ScenarioPolicy(PlayerId player, std::vector<double> probs)
      : player_(player), probs_(std::move(probs)) {}
  std::vector<double> action_probabilities(const GameState& state) const override {
    if (state.current_player() != player_) {
      throw std::logic_error("scenario policy queried for the wrong player");
    }
    return probs_;
  }

 private:
  PlayerId player_;
  std::vector<double> probs_;
};

}  // namespace

std::shared_ptr<const Policy> RadarJamGame::scenario_policy() const {
  if (config_.scenario != Scenario::kCaseA && config_.scenario != Scenario::kCaseB) {
    throw std::logic_error(
        "scenario_policy is only defined for case_a/case_b; case_c/case_d "
        "restrict the jammer's legal actions instead");
  }
  return std::make_shared<ScenarioPolicy>(restricted_player(), scenario_distribution());
}

bool RadarJamGame::radar_cell_possible(int freq, int k) const {
  return radar_possible_.at(freq).at(k);
}

bool RadarJamGame::jammer_cell_possible(int freq, int k) const {
  return jammer_possible_.at(freq).at(k);
}

RadarJamState::RadarJamState(std::shared_ptr<const RadarJamGame> game)
    : game_(std::move(game)) {}

std::unique_ptr<GameState> RadarJamState::clone() const {
  return std::make_unique<RadarJamState>(*this);
}

PlayerId RadarJamState::current_player() const {
  if (static_cast<int>(history_.size()) == 2 * game_->num_pulses()) {
    return kTerminalPlayer;
  }
  return static_cast<PlayerId>(history_.size() % 2);
}

std::vector<ActionId> RadarJamState::legal_actions() const {
  const PlayerId p = current_player();
  if (p != 0 && p != 1) throw std::logic_error("legal_actions() on terminal state");
  const size_t n =
      p == 0 ? game_->radar_menu().size() : game_->jammer_menu().size();
  std::vector<ActionId> actions(n);
  for (size_t i = 0; i < n; ++i) actions[i] = static_cast<ActionId>(i);
  return actions;
}

void RadarJamState::apply_action(ActionId action) {
  const PlayerId p = current_player();
  if (p != 0 && p != 1) throw std::logic_error("apply_action() on terminal state");
  const auto menu_size = p == 0 ? game_->radar_menu().size() : game_->jammer_menu().size();
  if (action < 0 || action >= static_cast<ActionId>(menu_size)) {
    throw std::out_of_range("action outside the menu");
  }
  history_.push_back(action);
}

std::vector<double> RadarJamState::returns() const {
  if (!is_terminal()) throw std::logic_error("returns() on non-terminal state");
  const double pd = game_->terminal_pd(history_);
  return {pd, -pd};
}

bool RadarJamState::radar_move_visible(PlayerId player, int round_index) const {
  const int len = static_cast<int>(history_.size());
  if (len <= 2 * round_index) return false;  // not played yet
  if (player == 0) return true;
  // The jammer sees a round's tuple once that round is complete; while it is
  // deciding, the current tuple is hidden.
  return len > 2 * round_index + 1;
}

InfoStateKey RadarJamState::info_state_key(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  std::string digest = player == 0 ? "R" : "J";
  const int len = static_cast<int>(history_.size());
  for (int m = 0; 2 * m < len; ++m) {
    digest += '|';
    if (radar_move_visible(player, m)) {
      for (const int f : game_->radar_tuple(history_[2 * m])) {
        digest += static_cast<char>('0' + f);
      }
    } else {
      digest += '?';
    }
    if (2 * m + 1 < len) {
      digest += '>';
      digest += game_->jammer_menu()[history_[2 * m + 1]].to_string();
    }
  }
  return {player, std::move(digest)};
}

std::string RadarJamState::to_string() const {
  // Omniscient board: carriers as rows, M*K subpulse slots as columns.
  const int n = game_->num_freqs();
  const int k = game_->num_subpulses();
  const int m = game_->num_pulses();
  std::vector<std::string> grid(n, std::string(m * k, '.'));
  for (int r = 0; 2 * r < static_cast<int>(history_.size()); ++r) {
    const auto& tuple = game_->radar_tuple(history_[2 * r]);
    for (int i = 0; i < k; ++i) grid[tuple[i]][r * k + i] = 'T';
    if (2 * r + 1 < static_cast<int>(history_.size())) {
      const auto& jam = game_->jammer_menu()[history_[2 * r + 1]];
      auto mark = [&](int f, int i) {
        char& c = grid[f][r * k + i];
        c = c == 'T' ? 'X' : 'J';
      };
      switch (jam.kind) {
        case JammerAction::kSpot:
          for (int i = 0; i < k; ++i) mark(jam.freq, i);
          break;
        case JammerAction::kBarrage:
          for (int f = 0; f < n; ++f) {
            for (int i = 0; i < k; ++i) mark(f, i);
          }
          break;
        case JammerAction::kReact:
          for (int i = 1; i < k; ++i) mark(tuple[0], i);
          break;
      }
    }
  }
  std::string out = "pulse:    ";
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < k; ++i) out += static_cast<char>('0' + r % 10);
    if (r + 1 < m) out += ' ';
  }
  out += '\n';
  for (int f = 0; f < n; ++f) {
    out += "freq " + std::to_string(f) + ":   ";
    for (int r = 0; r < m; ++r) {
      out += grid[f].substr(r * k, k);
      if (r + 1 < m) out += ' ';
    }
    out += '\n';
  }
  return out;
}

}  // namespace jamlab
