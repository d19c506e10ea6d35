#include "jamlab/physics.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jamlab/marcum.h"

namespace jamlab {
namespace {

constexpr double kBoltzmann = 1.380649e-23;  // J/K, exact SI

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double DetectionInput::effective_snr() const {
  double total = 0.0;
  for (const double s : cell_sinr) total += s;
  return total;
}

RadarPhysics::RadarPhysics(PhysicsParams params) : params_(std::move(params)) {
  const auto& p = params_;
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("PhysicsParams: ") + what);
  };
  require(p.transmit_power > 0, "transmit_power must be positive");
  require(p.wavelength > 0, "wavelength must be positive");
  require(p.target_range > 0, "target_range must be positive");
  require(p.system_temp > 0, "system_temp must be positive");
  require(p.subpulse_bandwidth > 0, "subpulse_bandwidth must be positive");
  require(p.jammer_power > 0, "jammer_power must be positive");
  require(!p.rcs.empty(), "rcs must have one entry per carrier");
  for (const double s : p.rcs) require(s > 0, "rcs entries must be positive");
  require(p.pfa > 0 && p.pfa < 1, "pfa must lie in (0, 1)");
  require(p.spot_bandwidth >= p.subpulse_bandwidth,
          "spot_bandwidth must cover at least one subpulse band");
  require(p.noise_bandwidth >= p.spot_bandwidth,
          "noise_bandwidth must be at least spot_bandwidth");

  const double pi = std::numbers::pi;
  const double g = db_to_linear(p.antenna_gain_db);
  const double gj = db_to_linear(p.jammer_gain_db);
  const double lam2 = p.wavelength * p.wavelength;
  const double r2 = p.target_range * p.target_range;
  const double kt = kBoltzmann * p.system_temp;

  // Monostatic radar equation, per subpulse, unit RCS.
  snr_unit_rcs_ = p.transmit_power * g * g * lam2 /
                  (std::pow(4.0 * pi, 3.0) * r2 * r2 * kt * p.subpulse_bandwidth);
  // One-way jam power into the subpulse band, ratioed to thermal noise. The
  // jammer spreads its power over spot_bandwidth (spot/react) or
  // noise_bandwidth (barrage); the receiver only admits its own band, so the
  // spread bandwidth divides the density.
  const double jam_common = p.jammer_power * gj * g * lam2 /
                            (std::pow(4.0 * pi, 2.0) * r2 * kt);
  jn_spot_ = jam_common / p.spot_bandwidth;
  jn_barrage_ = jam_common / p.noise_bandwidth;
  threshold_ = std::sqrt(-2.0 * std::log(p.pfa));
}

double RadarPhysics::snr(int freq) const {
  if (freq < 0 || freq >= num_freqs()) throw std::out_of_range("bad carrier index");
  return snr_unit_rcs_ * params_.rcs[freq];
}

double RadarPhysics::jam_to_noise(JamTag tag) const {
  switch (tag) {
    case JamTag::kNone: return 0.0;
    case JamTag::kSpot: return jn_spot_;
    case JamTag::kBarrage: return jn_barrage_;
  }
  throw std::logic_error("bad JamTag");
}

double RadarPhysics::cell_sinr(int freq, JamTag tag) const {
  return snr(freq) / (1.0 + jam_to_noise(tag));
}

double RadarPhysics::density_ratio() const {
  return params_.spot_bandwidth / params_.noise_bandwidth;
}

double RadarPhysics::detection_threshold() const { return threshold_; }

double RadarPhysics::probability_of_detection(const DetectionInput& input) const {
  return probability_of_detection(input.effective_snr());
}

double RadarPhysics::probability_of_detection(double effective_snr) const {
  return marcum_q1(std::sqrt(2.0 * effective_snr), threshold_);
}

}  // namespace jamlab
