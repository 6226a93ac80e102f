#pragma once

#include <cstdint>
#include <random>

namespace cbi {

// SplitMix64 finalizer. Used to derive well-separated engine seeds from a
// user seed plus stream identifiers, so that replicate r always gets the
// same stream no matter how work is scheduled across threads.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Fold stream identifiers into a seed, one mix round per id.
inline std::uint64_t substream_seed(std::uint64_t seed) { return mix64(seed); }

template <typename... Ids>
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t id, Ids... rest) {
  return substream_seed(mix64(seed ^ mix64(id)), rest...);
}

using RngEngine = std::mt19937_64;

// Engine for the substream identified by (seed, ids...).
template <typename... Ids>
RngEngine make_rng(std::uint64_t seed, Ids... ids) {
  return RngEngine(substream_seed(seed, static_cast<std::uint64_t>(ids)...));
}

inline double draw_normal(RngEngine& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  return d(rng);
}

inline std::uint64_t draw_poisson(RngEngine& rng, double mean) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> d(mean);
  return d(rng);
}

inline double draw_gamma(RngEngine& rng, double shape, double scale) {
  if (shape <= 0.0) return 0.0;
  std::gamma_distribution<double> d(shape, scale);
  return d(rng);
}

}  // namespace cbi
