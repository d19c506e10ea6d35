#pragma once

#include <cstdint>

#include "jamlab/game.h"

namespace jamlab {

struct SampledValue {
  double mean = 0.0;
  double std_error = 0.0;
  int episodes = 0;
};

// Exact player-0 expected utility under the profile, by full-tree walk.
// Only for games below the tabular gate; the caller checks tractability.
double exact_value(const Game& game, const Policy& p0, const Policy& p1);

// Monte Carlo estimate of the same quantity with its standard error.
SampledValue sampled_value(const Game& game, const Policy& p0, const Policy& p1,
                           int episodes, std::uint64_t seed);

// Snapshot of a policy at every reachable decision information state, for
// exploitability of network-backed policies. Full-tree walk; same gate
// caveat as exact_value.
TabularPolicy tabularize(const Game& game, const Policy& policy);

}  // namespace jamlab
