#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace headkey {

enum class GestureClass : std::uint8_t {
  SingleLeftTap,
  SingleRightTap,
  DoubleLeftTap,
  DoubleRightTap,
  SingleDownTap,
  LeftSlide,
  RightSlide,
  Noise,
};

inline constexpr std::size_t kGestureCount = 7;  // excluding Noise

inline constexpr std::array<GestureClass, kGestureCount> kAllGestures = {
    GestureClass::SingleLeftTap, GestureClass::SingleRightTap,
    GestureClass::DoubleLeftTap, GestureClass::DoubleRightTap,
    GestureClass::SingleDownTap, GestureClass::LeftSlide,
    GestureClass::RightSlide,
};

std::string_view gesture_name(GestureClass g);
std::optional<GestureClass> parse_gesture(std::string_view name);

constexpr std::size_t gesture_index(GestureClass g) {
  return static_cast<std::size_t>(g);
}

constexpr bool is_block_gesture(GestureClass g) {
  return g == GestureClass::SingleLeftTap || g == GestureClass::SingleRightTap ||
         g == GestureClass::DoubleLeftTap || g == GestureClass::DoubleRightTap;
}

}  // namespace headkey
