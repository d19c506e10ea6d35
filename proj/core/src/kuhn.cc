#include "jamlab/kuhn.h"

#include <array>
#include <stdexcept>

namespace jamlab {
namespace {

// (p0 card, p1 card) per chance outcome.
constexpr std::array<std::array<int, 2>, 6> kDeals = {{
    {0, 1}, {0, 2}, {1, 0}, {1, 2}, {2, 0}, {2, 1}}};

bool is_terminal_bets(const std::string& bets) {
  return bets == "pp" || bets == "bp" || bets == "bb" || bets == "pbp" ||
         bets == "pbb";
}

}  // namespace

std::unique_ptr<GameState> KuhnGame::new_initial_state() const {
  return std::make_unique<KuhnState>();
}

std::unique_ptr<GameState> KuhnState::clone() const {
  return std::make_unique<KuhnState>(*this);
}

bool KuhnState::betting_over() const { return is_terminal_bets(bets_); }

PlayerId KuhnState::current_player() const {
  if (deal_ < 0) return kChancePlayer;
  if (betting_over()) return kTerminalPlayer;
  return static_cast<PlayerId>(bets_.size() % 2);
}

std::vector<ActionId> KuhnState::legal_actions() const {
  if (deal_ < 0 || betting_over()) {
    throw std::logic_error("legal_actions() on non-decision Kuhn state");
  }
  return {0, 1};
}

std::vector<std::pair<ActionId, double>> KuhnState::chance_outcomes() const {
  if (deal_ >= 0) return GameState::chance_outcomes();
  std::vector<std::pair<ActionId, double>> out;
  for (int i = 0; i < 6; ++i) out.emplace_back(i, 1.0 / 6.0);
  return out;
}

void KuhnState::apply_action(ActionId action) {
  if (deal_ < 0) {
    if (action < 0 || action >= 6) throw std::out_of_range("bad deal outcome");
    deal_ = action;
    return;
  }
  if (betting_over()) throw std::logic_error("apply_action() on terminal Kuhn state");
  if (action != 0 && action != 1) throw std::out_of_range("bad Kuhn action");
  bets_.push_back(action == 0 ? 'p' : 'b');
}

std::vector<double> KuhnState::returns() const {
  if (current_player() != kTerminalPlayer) {
    throw std::logic_error("returns() on non-terminal Kuhn state");
  }
  const int c0 = kDeals[deal_][0];
  const int c1 = kDeals[deal_][1];
  const double win = c0 > c1 ? 1.0 : -1.0;
  double u0 = 0.0;
  if (bets_ == "pp") u0 = win;
  else if (bets_ == "bp") u0 = 1.0;
  else if (bets_ == "bb") u0 = 2.0 * win;
  else if (bets_ == "pbp") u0 = -1.0;
  else u0 = 2.0 * win;  // "pbb"
  return {u0, -u0};
}

InfoStateKey KuhnState::info_state_key(PlayerId player) const {
  if (player != 0 && player != 1) throw std::out_of_range("bad player");
  if (deal_ < 0) throw std::logic_error("info_state_key() before the deal");
  const int card = kDeals[deal_][player];
  std::string digest = player == 0 ? "P0|c" : "P1|c";
  digest += static_cast<char>('0' + card);
  digest += '|';
  digest += bets_;
  return {player, std::move(digest)};
}

std::string KuhnState::to_string() const {
  if (deal_ < 0) return "kuhn: predeal";
  std::string s = "kuhn: cards ";
  s += static_cast<char>('0' + kDeals[deal_][0]);
  s += static_cast<char>('0' + kDeals[deal_][1]);
  s += " bets ";
  s += bets_.empty() ? "-" : bets_;
  return s;
}

}  // namespace jamlab
