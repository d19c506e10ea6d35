#pragma once

#include "jamlab/game.h"

namespace jamlab {

// Exact best-response value for br_player against the opponent's policy,
// computed at the info-state level (argmax of opponent-reach-weighted action
// values, memoized over the tree). Ties break toward the lowest action index.
double best_response_value(const Game& game, PlayerId br_player, const Policy& opponent);

// Same computation, also returning the maximizing pure policy.
TabularPolicy best_response_policy(const Game& game, PlayerId br_player,
                                   const Policy& opponent, double* value = nullptr);

// Average of the two best-response gains: nonnegative, zero exactly at a
// Nash equilibrium of a zero-sum game.
double exploitability(const Game& game, const Policy& p0, const Policy& p1);

}  // namespace jamlab
