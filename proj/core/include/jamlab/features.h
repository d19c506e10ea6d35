#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <stdexcept>

#include "jamlab/game.h"
#include "jamlab/kuhn.h"
#include "jamlab/tensor.h"

namespace jamlab {

// Maps a decision state to the acting player's feature vector. The deep
// solvers are game-agnostic through this hook; encodings must be constant on
// each information state.
struct FeatureEncoder {
  int size = 0;
  std::function<Eigen::VectorXd(const GameState&)> encode;
};

inline FeatureEncoder make_radar_encoder(std::shared_ptr<const RadarJamGame> game) {
  FeatureEncoder enc;
  enc.size = info_state_tensor_size(game->config());
  enc.encode = [](const GameState& state) {
    const auto* radar = dynamic_cast<const RadarJamState*>(&state);
    if (radar == nullptr) throw std::invalid_argument("radar encoder fed a non-radar state");
    const auto values = encode_info_state(*radar, state.current_player());
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()))
        .eval();
  };
  return enc;
}

// Card one-hot (3) plus betting-context one-hot over {"", "p", "b", "pb"} (4),
// recovered from the digest "P<p>|c<card>|<bets>".
inline FeatureEncoder make_kuhn_encoder() {
  FeatureEncoder enc;
  enc.size = 7;
  enc.encode = [](const GameState& state) {
    const auto key = state.info_state_key(state.current_player());
    const auto& d = key.digest;
    if (d.size() < 6 || d[3] != 'c') throw std::invalid_argument("not a kuhn digest");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(7);
    out(d[4] - '0') = 1.0;
    const std::string bets = d.substr(6);
    int slot;
    if (bets.empty()) slot = 0;
    else if (bets == "p") slot = 1;
    else if (bets == "b") slot = 2;
    else if (bets == "pb") slot = 3;
    else throw std::invalid_argument("unexpected kuhn betting context");
    out(3 + slot) = 1.0;
    return out;
  };
  return enc;
}

}  // namespace jamlab
