#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace jamlab {

// Seeded generator with hand-rolled sampling helpers. std::*_distribution is
// implementation-defined, so everything downstream samples through these to
// keep runs bit-reproducible for a given binary.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}, rejection sampled (no modulo bias).
  int uniform_int(int n);

  // Index sampled from a probability vector (assumed to sum to ~1).
  int sample_discrete(const std::vector<double>& probs);

  // Derive an independent stream, e.g. per component or per iteration.
  Rng split(std::uint64_t salt);

 private:
  std::mt19937_64 engine_;
};

}  // namespace jamlab
