#pragma once

#include <string>
#include <string_view>

namespace mohpo::space {

enum class Direction { maximize, minimize };

/// Maps an objective value to "larger is better" orientation.
inline double oriented(double value, Direction direction) {
  return direction == Direction::maximize ? value : -value;
}

/// Maps an objective value to the minimization convention used by samplers.
inline double canonical(double value, Direction direction) {
  return direction == Direction::maximize ? -value : value;
}

std::string to_string(Direction direction);
Direction parse_direction(std::string_view text);

}  // namespace mohpo::space
