#include "jamlab/best_response.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "jamlab/game.h"
#include "jamlab/kuhn.h"
#include "jamlab/radar_game.h"
#include "jamlab/rng.h"

namespace jamlab {
namespace {

// Random behavioral policy for `player` over every info state in the game.
TabularPolicy random_policy(const Game& game, PlayerId player, std::uint64_t seed) {
  Rng rng(seed);
  TabularPolicy policy;
  for (const auto& [key, num_actions] : enumerate_info_states(game)) {
    if (key.player != player) continue;
    std::vector<double> probs(static_cast<std::size_t>(num_actions));
    double sum = 0.0;
    for (double& p : probs) {
      p = rng.uniform() + 1e-3;
      sum += p;
    }
    for (double& p : probs) p /= sum;
    policy.set(key, probs);
  }
  return policy;
}

// All one-hot assignments over `player`'s info states.
std::vector<TabularPolicy> pure_policies(const Game& game, PlayerId player) {
  std::vector<InfoStateKey> keys;
  std::vector<int> arity;
  for (const auto& [key, num_actions] : enumerate_info_states(game)) {
    if (key.player != player) continue;
    keys.push_back(key);
    arity.push_back(num_actions);
  }
  std::vector<TabularPolicy> out;
  std::vector<int> choice(keys.size(), 0);
  while (true) {
    TabularPolicy policy;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      std::vector<double> probs(static_cast<std::size_t>(arity[i]), 0.0);
      probs[static_cast<std::size_t>(choice[i])] = 1.0;
      policy.set(keys[i], probs);
    }
    out.push_back(std::move(policy));
    std::size_t i = 0;
    for (; i < keys.size(); ++i) {
      if (++choice[i] < arity[i]) break;
      choice[i] = 0;
    }
    if (i == keys.size()) break;
  }
  return out;
}

TEST(BestResponse, MatchesPureStrategyEnumerationOnKuhn) {
  KuhnGame game;
  const UniformPolicy uniform;
  const auto opponents = {random_policy(game, 1, 11), random_policy(game, 1, 12)};

  const auto pures0 = pure_policies(game, 0);
  ASSERT_EQ(pures0.size(), 64u);  // 6 info states x 2 actions

  auto check_player0 = [&](const Policy& opponent) {
    double best = -1e30;
    for (const auto& pure : pures0) {
      best = std::max(best, expected_utility(game, pure, opponent, 0));
    }
    EXPECT_NEAR(best_response_value(game, 0, opponent), best, 1e-12);
  };
  check_player0(uniform);
  for (const auto& opponent : opponents) check_player0(opponent);

  const auto pures1 = pure_policies(game, 1);
  ASSERT_EQ(pures1.size(), 64u);
  const auto opponent0 = random_policy(game, 0, 21);
  double best1 = -1e30;
  for (const auto& pure : pures1) {
    best1 = std::max(best1, expected_utility(game, opponent0, pure, 1));
  }
  EXPECT_NEAR(best_response_value(game, 1, opponent0), best1, 1e-12);
}

TEST(BestResponse, MatchesMatrixBruteForceOnSingleRoundRadar) {
  RadarGameConfig config;
  config.num_pulses = 1;
  const auto game = RadarJamGame::create(config);
  ASSERT_EQ(game->radar_menu().size(), 27u);
  ASSERT_EQ(game->jammer_menu().size(), 5u);

  std::vector<std::vector<double>> payoff(27, std::vector<double>(5));
  for (ActionId a = 0; a < 27; ++a) {
    for (ActionId b = 0; b < 5; ++b) {
      payoff[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          game->terminal_pd({a, b});
    }
  }

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const TabularPolicy radar = random_policy(*game, 0, seed);
    const TabularPolicy jammer = random_policy(*game, 1, 100 + seed);
    const auto* x = radar.find({0, "R"});
    const auto* y = jammer.find({1, "J|?"});
    ASSERT_NE(x, nullptr);
    ASSERT_NE(y, nullptr);

    double br_radar = -1e30;
    for (int a = 0; a < 27; ++a) {
      double value = 0.0;
      for (int b = 0; b < 5; ++b) {
        value += (*y)[static_cast<std::size_t>(b)] *
                 payoff[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
      br_radar = std::max(br_radar, value);
    }
    double worst_pd = 1e30;
    for (int b = 0; b < 5; ++b) {
      double value = 0.0;
      for (int a = 0; a < 27; ++a) {
        value += (*x)[static_cast<std::size_t>(a)] *
                 payoff[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      }
      worst_pd = std::min(worst_pd, value);
    }

    EXPECT_NEAR(best_response_value(*game, 0, jammer), br_radar, 1e-12);
    EXPECT_NEAR(best_response_value(*game, 1, radar), -worst_pd, 1e-12);
    EXPECT_NEAR(exploitability(*game, radar, jammer),
                (br_radar - worst_pd) / 2.0, 1e-12);
  }
}

TEST(BestResponse, PolicyIsPureAndAchievesTheValue) {
  KuhnGame game;
  const TabularPolicy opponent = random_policy(game, 1, 7);
  double value = 0.0;
  const TabularPolicy br = best_response_policy(game, 0, opponent, &value);
  for (const auto& [key, probs] : br.table()) {
    EXPECT_EQ(key.player, 0);
    double max_prob = 0.0;
    double sum = 0.0;
    for (const double p : probs) {
      EXPECT_TRUE(p == 0.0 || p == 1.0);
      max_prob = std::max(max_prob, p);
      sum += p;
    }
    EXPECT_EQ(max_prob, 1.0);
    EXPECT_EQ(sum, 1.0);
  }
  EXPECT_NEAR(expected_utility(game, br, opponent, 0), value, 1e-12);
  EXPECT_NEAR(best_response_value(game, 0, opponent), value, 1e-12);
}

TEST(BestResponse, DominatesArbitraryPolicies) {
  KuhnGame game;
  for (std::uint64_t seed = 31; seed < 34; ++seed) {
    const TabularPolicy opponent = random_policy(game, 1, seed);
    const double br = best_response_value(game, 0, opponent);
    for (std::uint64_t alt = 41; alt < 44; ++alt) {
      const TabularPolicy candidate = random_policy(game, 0, alt);
      EXPECT_GE(br + 1e-12, expected_utility(game, candidate, opponent, 0));
    }
  }
}

TEST(BestResponse, PureOpponentReducesToRowMax) {
  RadarGameConfig config;
  config.num_pulses = 1;
  config.num_subpulses = 1;
  config.num_freqs = 2;
  config.physics.rcs = {15.0, 3.0};
  const auto game = RadarJamGame::create(config);

  TabularPolicy jammer;  // always Spot f0
  jammer.set({1, "J|?"}, {1.0, 0.0, 0.0, 0.0});
  double expected = -1e30;
  for (ActionId a = 0; a < 2; ++a) {
    expected = std::max(expected, game->terminal_pd({a, 0}));
  }
  EXPECT_NEAR(best_response_value(*game, 0, jammer), expected, 1e-12);
  // Spotting f0 pushes the radar to the clean carrier f1.
  EXPECT_DOUBLE_EQ(expected, game->terminal_pd({1, 0}));
}

TEST(BestResponse, TiesBreakTowardLowestActionIndex) {
  RadarGameConfig config;
  config.num_pulses = 1;
  config.num_subpulses = 1;
  config.num_freqs = 2;
  config.physics.rcs = {15.0, 15.0};
  const auto game = RadarJamGame::create(config);

  TabularPolicy jammer;  // uniform over the two spots: both carriers tie
  jammer.set({1, "J|?"}, {0.5, 0.5, 0.0, 0.0});
  const TabularPolicy br = best_response_policy(*game, 0, jammer);
  const auto* row = br.find({0, "R"});
  ASSERT_NE(row, nullptr);
  EXPECT_DOUBLE_EQ((*row)[0], 1.0);
  EXPECT_DOUBLE_EQ((*row)[1], 0.0);
}

}  // namespace
}  // namespace jamlab
