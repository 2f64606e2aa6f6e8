#pragma once

#include <string>
#include <vector>

namespace g3 {

enum class Elevation { None, Up, Down };

/// Expected turn in radians: +pi/2 for "left", -pi/2 for "right", else 0.
double expected_turn(const std::vector<std::string>& verb_words);
Elevation elevation_directive(const std::vector<std::string>& verb_words);
/// Angle wrapped to (-pi, pi].
double wrap_angle(double a);

inline constexpr double kElevationMismatch = 0.000001;

/// p = 1 / (1 + exp(|expected - actual|)) times the elevation factor: 1 when
/// an up/down directive matches the change in height, 1e-6 when it does not.
double verb_prob(const std::vector<std::string>& verb_words, double actual_turn, double start_z = 0.0,
                 double end_z = 0.0);

}  // namespace g3
