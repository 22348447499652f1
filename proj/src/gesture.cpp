#include "headkey/gesture.hpp"

namespace headkey {

namespace {
constexpr std::array<std::string_view, 8> kNames = {
    "SingleLeftTap", "SingleRightTap", "DoubleLeftTap", "DoubleRightTap",
    "SingleDownTap", "LeftSlide",      "RightSlide",    "Noise",
};
}  // namespace

std::string_view gesture_name(GestureClass g) {
  return kNames[static_cast<std::size_t>(g)];
}

std::optional<GestureClass> parse_gesture(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<GestureClass>(i);
  }
  return std::nullopt;
}

}  // namespace headkey
