#include "headkey/keyboard.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "headkey/errors.hpp"
#include "text_util.hpp"

namespace headkey {

namespace {
constexpr std::array<std::string_view, 4> kBlockNames = {"TL", "TR", "BL", "BR"};
}  // namespace

std::string_view block_name(Block b) { return kBlockNames[block_index(b)]; }

std::optional<Block> parse_block(std::string_view name) {
  for (std::size_t i = 0; i < kBlockNames.size(); ++i) {
    if (kBlockNames[i] == name) return static_cast<Block>(i);
  }
  return std::nullopt;
}

KeyboardLayout::KeyboardLayout(std::array<std::string, 4> letters,
                               std::array<GestureBinding, 4> bindings)
    : letters_(std::move(letters)) {
  std::array<bool, 26> seen{};
  for (Block b : kAllBlocks) {
    const auto& set = letters_[block_index(b)];
    if (set.empty()) throw InvalidInput("block " + std::string(block_name(b)) + " is empty");
    for (char c : set) {
      if (c < 'a' || c > 'z')
        throw InvalidInput("block " + std::string(block_name(b)) + " holds non a-z letter");
      const auto i = static_cast<std::size_t>(c - 'a');
      if (seen[i]) throw InvalidInput(std::string("letter '") + c + "' is in two blocks");
      seen[i] = true;
      block_of_letter_[i] = b;
    }
  }
  for (std::size_t i = 0; i < 26; ++i) {
    if (!seen[i])
      throw InvalidInput(std::string("letter '") + static_cast<char>('a' + i) +
                         "' is in no block");
  }

  std::array<bool, 4> block_bound{};
  std::array<bool, kGestureCount> gesture_bound{};
  for (const auto& [g, b] : bindings) {
    if (!is_block_gesture(g))
      throw InvalidInput(std::string(gesture_name(g)) + " cannot select a block");
    if (gesture_bound[gesture_index(g)])
      throw InvalidInput(std::string(gesture_name(g)) + " is bound twice");
    if (block_bound[block_index(b)])
      throw InvalidInput("block " + std::string(block_name(b)) + " is bound twice");
    gesture_bound[gesture_index(g)] = true;
    block_bound[block_index(b)] = true;
    gesture_of_block_[block_index(b)] = g;
  }
}

Block KeyboardLayout::block_of(char letter) const {
  if (letter < 'a' || letter > 'z')
    throw InvalidInput(std::string("not a lowercase letter: '") + letter + "'");
  return block_of_letter_[static_cast<std::size_t>(letter - 'a')];
}

std::optional<Block> KeyboardLayout::block_for(GestureClass g) const {
  for (Block b : kAllBlocks) {
    if (gesture_of_block_[block_index(b)] == g) return b;
  }
  return std::nullopt;
}

std::vector<Block> KeyboardLayout::blocks_of(std::string_view word) const {
  std::vector<Block> out;
  out.reserve(word.size());
  for (char c : word) out.push_back(block_of(c));
  return out;
}

KeyboardLayout KeyboardLayout::parse(std::istream& in) {
  std::array<std::optional<std::string>, 4> letters;
  std::vector<GestureBinding> bindings;
  std::string line;
  std::size_t no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw InvalidInput("layout line " + std::to_string(no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto colon = body.find(':');
    if (colon == std::string_view::npos) fail("expected key:value");
    const auto key = detail::trim(body.substr(0, colon));
    const auto value = detail::trim(body.substr(colon + 1));
    if (auto b = parse_block(key)) {
      if (letters[block_index(*b)]) fail("block " + std::string(key) + " given twice");
      letters[block_index(*b)] = std::string(value);
    } else if (auto g = parse_gesture(key)) {
      auto target = parse_block(value);
      if (!target) fail("unknown block '" + std::string(value) + "'");
      bindings.push_back({*g, *target});
    } else {
      fail("unknown key '" + std::string(key) + "'");
    }
  }
  std::array<std::string, 4> blocks;
  for (Block b : kAllBlocks) {
    if (!letters[block_index(b)])
      throw InvalidInput("layout is missing block " + std::string(block_name(b)));
    blocks[block_index(b)] = *letters[block_index(b)];
  }
  if (bindings.size() != 4) throw InvalidInput("layout needs exactly 4 gesture bindings");
  return KeyboardLayout(std::move(blocks), {bindings[0], bindings[1], bindings[2], bindings[3]});
}

KeyboardLayout KeyboardLayout::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse(in);
}

void KeyboardLayout::write(std::ostream& out) const {
  for (Block b : kAllBlocks) out << block_name(b) << ':' << letters(b) << '\n';
  for (Block b : kAllBlocks) out << gesture_name(gesture_for(b)) << ':' << block_name(b) << '\n';
}

KeyboardLayout default_layout() {
  return KeyboardLayout({"abcdefg", "hijklm", "nopqrs", "tuvwxyz"},
                        {{{GestureClass::SingleLeftTap, Block::TL},
                          {GestureClass::SingleRightTap, Block::TR},
                          {GestureClass::DoubleLeftTap, Block::BL},
                          {GestureClass::DoubleRightTap, Block::BR}}});
}

void SpatialModel::validate() const {
  for (double p : {p_same, p_adjacent, p_diagonal}) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0)
      throw InvalidInput("spatial probabilities must lie in [0, 1]");
  }
  if (!(p_same > 0.0)) throw InvalidInput("p_same must be > 0");
  const double sum = p_same + 2.0 * p_adjacent + p_diagonal;
  if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput("spatial model rows must sum to 1");
}

double spatial_prob(Block observed, Block intended, const SpatialModel& model) {
  switch (grid_relation(observed, intended)) {
    case GridRelation::Same:
      return model.p_same;
    case GridRelation::Adjacent:
      return model.p_adjacent;
    case GridRelation::Diagonal:
      return model.p_diagonal;
  }
  return 0.0;
}

}  // namespace headkey
