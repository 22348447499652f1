#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "headkey/gesture.hpp"

namespace headkey {

/// Position on the 2x2 key grid.
enum class Block : std::uint8_t { TL = 0, TR = 1, BL = 2, BR = 3 };

inline constexpr std::array<Block, 4> kAllBlocks = {Block::TL, Block::TR, Block::BL,
                                                    Block::BR};

std::string_view block_name(Block b);
std::optional<Block> parse_block(std::string_view name);

constexpr std::size_t block_index(Block b) { return static_cast<std::size_t>(b); }
constexpr int block_row(Block b) { return static_cast<int>(b) / 2; }
constexpr int block_col(Block b) { return static_cast<int>(b) % 2; }

enum class GridRelation { Same, Adjacent, Diagonal };

constexpr GridRelation grid_relation(Block a, Block b) {
  if (a == b) return GridRelation::Same;
  if (block_row(a) == block_row(b) || block_col(a) == block_col(b))
    return GridRelation::Adjacent;
  return GridRelation::Diagonal;
}

/// Four letter blocks partitioning a..z, and a bijection between the four
/// tap gestures and the blocks.
class KeyboardLayout {
 public:
  struct GestureBinding {
    GestureClass gesture;
    Block block;
  };

  /// Throws InvalidInput unless the blocks partition a..z and the bindings
  /// map the four tap gestures one-to-one onto the four blocks.
  KeyboardLayout(std::array<std::string, 4> letters, std::array<GestureBinding, 4> bindings);

  Block block_of(char letter) const;
  const std::string& letters(Block b) const { return letters_[block_index(b)]; }
  std::optional<Block> block_for(GestureClass g) const;
  GestureClass gesture_for(Block b) const { return gesture_of_block_[block_index(b)]; }

  /// Block sequence of a lowercase word. Throws InvalidInput on other chars.
  std::vector<Block> blocks_of(std::string_view word) const;

  // `position:letters` x4 then `gesture:position` x4.
  static KeyboardLayout parse(std::istream& in);
  static KeyboardLayout load(const std::filesystem::path& path);
  void write(std::ostream& out) const;

 private:
  std::array<std::string, 4> letters_;
  std::array<Block, 26> block_of_letter_{};
  std::array<GestureClass, 4> gesture_of_block_{};
};

/// Alphabetical 7/6/6/7 split: TL a-g, TR h-m, BL n-s, BR t-z.
/// SingleLeftTap->TL, SingleRightTap->TR, DoubleLeftTap->BL, DoubleRightTap->BR.
KeyboardLayout default_layout();

/// P(observed block | intended block) by grid relation.
struct SpatialModel {
  double p_same = 0.94;
  double p_adjacent = 0.025;
  double p_diagonal = 0.01;

  /// Each intended block has one same, two adjacent and one diagonal
  /// neighbour, so p_same + 2 p_adjacent + p_diagonal must be 1.
  void validate() const;

  /// No auto-correct: observed must equal intended.
  static SpatialModel indicator() { return {1.0, 0.0, 0.0}; }
};

double spatial_prob(Block observed, Block intended, const SpatialModel& model);

}  // namespace headkey
