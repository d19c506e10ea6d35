#include "jamlab/eval.h"

#include <cmath>
#include <memory>
#include <vector>

#include <gtest/gtest.h>

#include "jamlab/cfr.h"
#include "jamlab/game.h"
#include "jamlab/kuhn.h"
#include "jamlab/radar_game.h"
#include "jamlab/rng.h"

namespace jamlab {
namespace {

std::shared_ptr<const RadarJamGame> tiny_game() {
  RadarGameConfig config;
  config.num_pulses = 1;
  config.num_subpulses = 1;
  config.num_freqs = 2;
  config.physics.rcs = {15.0, 15.0};
  return RadarJamGame::create(config);
}

TabularPolicy random_policy(const Game& game, std::uint64_t seed) {
  Rng rng(seed);
  TabularPolicy policy;
  for (const auto& [key, num_actions] : enumerate_info_states(game)) {
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

TEST(Eval, ExactValueMatchesHandEnumerationOnTinyGame) {
  const auto game = tiny_game();
  const UniformPolicy uniform;
  double hand = 0.0;
  for (ActionId a = 0; a < 2; ++a) {
    for (ActionId b = 0; b < 4; ++b) {
      hand += 0.5 * 0.25 * game->terminal_pd({a, b});
    }
  }
  EXPECT_NEAR(exact_value(*game, uniform, uniform), hand, 1e-15);
}

TEST(Eval, ExactValueAgreesWithExpectedUtility) {
  KuhnGame game;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const TabularPolicy p0 = random_policy(game, seed);
    const TabularPolicy p1 = random_policy(game, 50 + seed);
    EXPECT_NEAR(exact_value(game, p0, p1), expected_utility(game, p0, p1, 0), 1e-12);
  }
}

TEST(Eval, ExactValueIsDeterministicOnReRun) {
  const auto game = tiny_game();
  const TabularPolicy profile = random_policy(*game, 9);
  const double first = exact_value(*game, profile, profile);
  const double second = exact_value(*game, profile, profile);
  EXPECT_EQ(first, second);
}

TEST(Eval, SampledValueWithinThreeStandardErrors) {
  const auto game = tiny_game();
  const UniformPolicy uniform;
  const double exact = exact_value(*game, uniform, uniform);
  const SampledValue sampled = sampled_value(*game, uniform, uniform, 100000, 17);
  EXPECT_EQ(sampled.episodes, 100000);
  EXPECT_GT(sampled.std_error, 0.0);
  EXPECT_NEAR(sampled.mean, exact, 3.0 * sampled.std_error);
  // The outcome spread is bounded by the detection-probability range, so the
  // standard error must sit well under that bound / sqrt(episodes).
  EXPECT_LT(sampled.std_error, 1.0 / std::sqrt(100000.0));
}

TEST(Eval, SampledValueIsDeterministicPerSeed) {
  KuhnGame game;
  const TabularPolicy p0 = random_policy(game, 5);
  const TabularPolicy p1 = random_policy(game, 6);
  const SampledValue a = sampled_value(game, p0, p1, 2000, 33);
  const SampledValue b = sampled_value(game, p0, p1, 2000, 33);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  const SampledValue c = sampled_value(game, p0, p1, 2000, 34);
  EXPECT_NE(a.mean, c.mean);
}

TEST(Eval, DeterministicProfileHasZeroSamplingError) {
  const auto game = tiny_game();  // no chance nodes
  TabularPolicy pure;
  pure.set({0, "R"}, {1.0, 0.0});
  pure.set({1, "J|?"}, {0.0, 0.0, 0.0, 1.0});
  const SampledValue sampled = sampled_value(*game, pure, pure, 500, 2);
  EXPECT_LT(sampled.std_error, 1e-12);
  EXPECT_NEAR(sampled.mean, game->terminal_pd({0, 3}), 1e-12);
}

TEST(Eval, TabularizeReproducesATabularPolicy) {
  KuhnGame game;
  const TabularPolicy original = random_policy(game, 77);
  const TabularPolicy snapshot = tabularize(game, original);
  const auto info_states = enumerate_info_states(game);
  EXPECT_EQ(snapshot.table().size(), info_states.size());
  for (const auto& [key, probs] : snapshot.table()) {
    const auto* source = original.find(key);
    ASSERT_NE(source, nullptr);
    ASSERT_EQ(probs.size(), source->size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      EXPECT_EQ(probs[i], (*source)[i]);
    }
  }
}

TEST(Eval, TabularizedSnapshotEvaluatesIdentically) {
  // Snapshotting a trained policy must not change any exact evaluation.
  KuhnGame game;
  CfrSolver solver(game);
  solver.run_iterations(500);
  const TabularPolicy average = solver.average_policy();
  const TabularPolicy snapshot = tabularize(game, average);
  const TabularPolicy opponent = random_policy(game, 13);
  EXPECT_NEAR(exact_value(game, average, opponent),
              exact_value(game, snapshot, opponent), 1e-12);
  EXPECT_NEAR(exact_value(game, opponent, average),
              exact_value(game, opponent, snapshot), 1e-12);
}

}  // namespace
}  // namespace jamlab
