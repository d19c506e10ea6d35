#pragma once

#include <vector>

namespace jamlab {

// Link-budget constants for one engagement geometry. Carriers are indexed
// 0..N-1; rcs[f] is the target cross-section seen at carrier f, so frequency
// selectivity enters only through rcs.
struct PhysicsParams {
  double transmit_power = 30e3;      // W, per subpulse
  double antenna_gain_db = 30.0;     // radar antenna, one-way dB
  double wavelength = 0.03;          // m
  double target_range = 100e3;       // m
  double system_temp = 290.0;        // K
  double subpulse_bandwidth = 2e6;   // Hz, receiver band per subpulse
  double spot_bandwidth = 20e6;      // Hz, spot/react jam spread
  double noise_bandwidth = 500e6;    // Hz, barrage jam spread
  double jammer_power = 10.0;        // W
  double jammer_gain_db = 6.0;       // dB
  std::vector<double> rcs = {15.0, 3.0, 1.0};  // m^2 per carrier
  double pfa = 1e-4;                 // false alarm probability
};

enum class JamTag { kNone, kSpot, kBarrage };

// Per-cell SINRs feeding the detector. Kept as its own type so the
// integration rule (currently a coherent sum across all cells) stays
// swappable without touching callers.
struct DetectionInput {
  std::vector<double> cell_sinr;
  double effective_snr() const;
};

class RadarPhysics {
 public:
  explicit RadarPhysics(PhysicsParams params);  // throws on invalid params

  const PhysicsParams& params() const { return params_; }
  int num_freqs() const { return static_cast<int>(params_.rcs.size()); }

  // Single-subpulse SNR at carrier f, no jamming. Proportional to rcs[f].
  double snr(int freq) const;
  // One-way jam-to-noise ratio in the subpulse band for the given jam type.
  double jam_to_noise(JamTag tag) const;
  double cell_sinr(int freq, JamTag tag) const;
  // Barrage spectral density relative to spot density
  // (= spot_bandwidth / noise_bandwidth).
  double density_ratio() const;
  // Detector threshold sqrt(-2 ln pfa); PD at zero SNR equals pfa.
  double detection_threshold() const;
  double probability_of_detection(const DetectionInput& input) const;
  double probability_of_detection(double effective_snr) const;

 private:
  PhysicsParams params_;
  double snr_unit_rcs_ = 0.0;
  double jn_spot_ = 0.0;
  double jn_barrage_ = 0.0;
  double threshold_ = 0.0;
};

}  // namespace jamlab
