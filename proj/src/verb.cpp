#include "g3/verb.hpp"

#include <cmath>
#include <numbers>

namespace g3 {

double expected_turn(const std::vector<std::string>& verb_words) {
  for (const std::string& w : verb_words) {
    if (w == "left") return std::numbers::pi / 2.0;
    if (w == "right") return -std::numbers::pi / 2.0;
  }
  return 0.0;
}

Elevation elevation_directive(const std::vector<std::string>& verb_words) {
  for (const std::string& w : verb_words) {
    if (w == "up" || w == "upstairs" || w == "ascend" || w == "climb") return Elevation::Up;
    if (w == "down" || w == "downstairs" || w == "descend") return Elevation::Down;
  }
  return Elevation::None;
}

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

double verb_prob(const std::vector<std::string>& verb_words, double actual_turn, double start_z, double end_z) {
  const double delta = wrap_angle(expected_turn(verb_words) - actual_turn);
  double p = 1.0 / (1.0 + std::exp(std::abs(delta)));
  switch (elevation_directive(verb_words)) {
    case Elevation::Up: p *= end_z > start_z ? 1.0 : kElevationMismatch; break;
    case Elevation::Down: p *= end_z < start_z ? 1.0 : kElevationMismatch; break;
    case Elevation::None: break;
  }
  return p;
}

}  // namespace g3
