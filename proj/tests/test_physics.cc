#include "jamlab/physics.h"

#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

namespace jamlab {
namespace {

TEST(Physics, SnrRatioTracksRcsExactly) {
  RadarPhysics physics{PhysicsParams{}};
  EXPECT_DOUBLE_EQ(physics.snr(0) / physics.snr(2), 15.0);
  EXPECT_DOUBLE_EQ(physics.snr(0) / physics.snr(1), 5.0);
  EXPECT_DOUBLE_EQ(physics.snr(1) / physics.snr(2), 3.0);
}

TEST(Physics, SnrProportionalToRcs) {
  PhysicsParams params;
  params.rcs = {15.0, 3.0, 1e-12};
  RadarPhysics physics{params};
  EXPECT_DOUBLE_EQ(physics.snr(0) / 15.0, physics.snr(1) / 3.0);
  EXPECT_DOUBLE_EQ(physics.snr(0) / 15.0, physics.snr(2) / 1e-12);
  EXPECT_LT(physics.snr(2), 1e-10);  // sigma -> 0 drives SNR -> 0
}

// Values frozen from a hand-evaluated radar equation / one-way equation
// before the implementation was written.
TEST(Physics, DefaultLinkBudgetPins) {
  RadarPhysics physics{PhysicsParams{}};
  EXPECT_NEAR(physics.snr(0), 0.254867321562, 1e-9);
  EXPECT_NEAR(physics.snr(1), 0.0509734643123, 1e-9);
  EXPECT_NEAR(physics.snr(2), 0.0169911547708, 1e-9);
  EXPECT_NEAR(physics.jam_to_noise(JamTag::kSpot), 283.34235887, 1e-6);
  EXPECT_NEAR(physics.jam_to_noise(JamTag::kBarrage), 11.3336943548, 1e-7);
  EXPECT_EQ(physics.jam_to_noise(JamTag::kNone), 0.0);
}

TEST(Physics, DensityRatioIsExact) {
  PhysicsParams params;
  params.spot_bandwidth = 2e6;
  params.subpulse_bandwidth = 2e6;
  RadarPhysics physics{params};
  EXPECT_EQ(physics.density_ratio(), 2e6 / 500e6);
  EXPECT_DOUBLE_EQ(physics.density_ratio(), 0.004);
  // Barrage spreads the same power over the wider band.
  EXPECT_DOUBLE_EQ(physics.jam_to_noise(JamTag::kBarrage),
                   physics.jam_to_noise(JamTag::kSpot) * physics.density_ratio());
}

TEST(Physics, DetectionThresholdAndZeroSnr) {
  RadarPhysics physics{PhysicsParams{}};
  EXPECT_NEAR(physics.detection_threshold(), 4.291932052578694, 1e-12);
  EXPECT_NEAR(physics.detection_threshold(), std::sqrt(-2.0 * std::log(1e-4)), 1e-12);
  EXPECT_NEAR(physics.probability_of_detection(0.0), 1e-4, 1e-9);
}

TEST(Physics, PdMonotoneOnGrid) {
  RadarPhysics physics{PhysicsParams{}};
  double prev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double snr = 20.0 * static_cast<double>(i) / 99.0;
    const double pd = physics.probability_of_detection(snr);
    EXPECT_GE(pd, prev - 1e-12) << "snr=" << snr;
    EXPECT_GE(pd, 1e-4 - 1e-12);
    EXPECT_LT(pd, 1.0);
    prev = pd;
  }
  EXPECT_GT(physics.probability_of_detection(50.0), 0.999);
}

TEST(Physics, CellSinrEscalation) {
  RadarPhysics physics{PhysicsParams{}};
  for (int f = 0; f < physics.num_freqs(); ++f) {
    const double clear = physics.cell_sinr(f, JamTag::kNone);
    const double barrage = physics.cell_sinr(f, JamTag::kBarrage);
    const double spot = physics.cell_sinr(f, JamTag::kSpot);
    EXPECT_DOUBLE_EQ(clear, physics.snr(f));
    EXPECT_GT(clear, barrage);
    EXPECT_GT(barrage, spot);
    EXPECT_DOUBLE_EQ(barrage, physics.snr(f) / (1.0 + physics.jam_to_noise(JamTag::kBarrage)));
  }
}

TEST(Physics, DetectionInputSumsCells) {
  DetectionInput input;
  input.cell_sinr = {0.5, 0.25, 0.0, 1.25};
  EXPECT_DOUBLE_EQ(input.effective_snr(), 2.0);
  RadarPhysics physics{PhysicsParams{}};
  EXPECT_DOUBLE_EQ(physics.probability_of_detection(input),
                   physics.probability_of_detection(2.0));
}

TEST(Physics, ValidationNamesTheField) {
  PhysicsParams bad_pfa;
  bad_pfa.pfa = 1.5;
  EXPECT_THROW(RadarPhysics{bad_pfa}, std::invalid_argument);
  try {
    RadarPhysics physics{bad_pfa};
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("pfa"), std::string::npos);
  }

  PhysicsParams bad_power;
  bad_power.transmit_power = 0.0;
  EXPECT_THROW(RadarPhysics{bad_power}, std::invalid_argument);

  PhysicsParams bad_bands;
  bad_bands.spot_bandwidth = 1e9;  // above noise_bandwidth
  EXPECT_THROW(RadarPhysics{bad_bands}, std::invalid_argument);

  PhysicsParams bad_rcs;
  bad_rcs.rcs = {};
  EXPECT_THROW(RadarPhysics{bad_rcs}, std::invalid_argument);

  PhysicsParams bad_spot;
  bad_spot.spot_bandwidth = 1e6;  // below subpulse_bandwidth
  EXPECT_THROW(RadarPhysics{bad_spot}, std::invalid_argument);
}

}  // namespace
}  // namespace jamlab
