#include "jamlab/rng.h"

#include <stdexcept>

namespace jamlab {

int Rng::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int needs n > 0");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t r;
  do {
    r = next_u64();
  } while (r >= limit);
  return static_cast<int>(r % un);
}

int Rng::sample_discrete(const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("empty distribution");
  const double u = uniform();
  double cum = 0.0;
  int last_positive = -1;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cum += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cum) return last_positive;
  }
  if (last_positive < 0) throw std::invalid_argument("distribution has no mass");
  return last_positive;  // rounding slack lands on the last carrier of mass
}

Rng Rng::split(std::uint64_t salt) {
  // Mix the salt through splitmix64 so adjacent salts decorrelate.
  std::uint64_t z = next_u64() + salt + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return Rng(z ^ (z >> 31));
}

}  // namespace jamlab
