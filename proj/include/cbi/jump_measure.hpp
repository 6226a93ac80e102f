#pragma once

#include <cstddef>
#include <vector>

namespace cbi {

// Finite atomic jump measure: a list of (size, rate) atoms. All moment
// integrals reduce to finite sums, and simulation of the associated jumps is
// exact compound Poisson.
class JumpMeasure {
 public:
  struct Atom {
    double size;  // z > 0
    double rate;  // mass per unit time, > 0
    bool operator==(const Atom&) const = default;
  };

  JumpMeasure() = default;
  explicit JumpMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }

  // integral z^q d(measure) = sum_j rate_j * size_j^q
  double moment(double q) const;

  // sum_j rate_j
  double total_rate() const;

  // integral min(1, z) d(measure)
  double truncated_first_moment() const;

  // integral over z > 1 of (z - 1) d(measure)
  double excess_above_one() const;

  bool operator==(const JumpMeasure&) const = default;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace cbi
