#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbi {

// Unit-spaced observations X_0..X_n of one simulated path, X_0 = 0.
struct Skeleton {
  std::vector<double> observations;
  std::uint64_t seed = 0;

  // Number of steps; observations holds n + 1 values.
  std::size_t n() const { return observations.empty() ? 0 : observations.size() - 1; }
};

// CSV with header "k,x", one row per observation, shortest round-trip doubles.
std::string skeleton_to_csv(const Skeleton& skel);
void write_skeleton_csv(const Skeleton& skel, const std::string& path);
Skeleton read_skeleton_csv(const std::string& path);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

}  // namespace cbi
