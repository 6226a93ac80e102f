#include "cbi/jump_measure.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "cbi/errors.hpp"

namespace cbi {

JumpMeasure::JumpMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.size > 0.0) || !std::isfinite(a.size)) {
      throw ConfigError("jump measure atom size must be positive and finite");
    }
    if (!(a.rate > 0.0) || !std::isfinite(a.rate)) {
      throw ConfigError("jump measure atom rate must be positive and finite");
    }
  }
}

double JumpMeasure::moment(double q) const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.rate * std::pow(a.size, q);
  return s;
}

double JumpMeasure::total_rate() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.rate;
  return s;
}

double JumpMeasure::truncated_first_moment() const {
  double s = 0.0;
  for (const Atom& a : atoms_) s += a.rate * std::min(1.0, a.size);
  return s;
}

double JumpMeasure::excess_above_one() const {
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (a.size > 1.0) s += a.rate * (a.size - 1.0);
  }
  return s;
}

}  // namespace cbi
