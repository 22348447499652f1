#include "headkey/dictionary.hpp"

#include <fstream>
#include <istream>

#include "headkey/errors.hpp"
#include "text_util.hpp"

namespace headkey {

bool is_lowercase_word(std::string_view w) {
  if (w.empty() || w.size() > kMaxWordLength) return false;
  for (char c : w) {
    if (c < 'a' || c > 'z') return false;
  }
  return true;
}

void Dictionary::add(std::string word, std::uint64_t count) {
  if (!is_lowercase_word(word))
    throw InvalidInput("dictionary word must be 1-28 lowercase a-z letters: '" + word + "'");
  if (count == 0) throw InvalidInput("dictionary count must be > 0 for '" + word + "'");
  if (index_.contains(word)) throw InvalidInput("duplicate dictionary word '" + word + "'");
  index_.emplace(word, entries_.size());
  entries_.push_back({std::move(word), count});
  total_ += count;
}

std::optional<std::uint64_t> Dictionary::count(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return entries_[it->second].count;
}

double Dictionary::probability(std::string_view word) const {
  auto c = count(word);
  if (!c) return 0.0;
  return static_cast<double>(*c) / static_cast<double>(total_);
}

Dictionary Dictionary::scaled(std::uint64_t factor) const {
  if (factor == 0) throw InvalidInput("scale factor must be > 0");
  Dictionary out;
  for (const auto& e : entries_) out.add(e.word, e.count * factor);
  return out;
}

Dictionary Dictionary::parse(std::istream& in) {
  Dictionary dict;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw InvalidInput("dictionary line " + std::to_string(no) + ": expected word<TAB>count");
    long long count = 0;
    if (!detail::parse_int(std::string_view(line).substr(tab + 1), count) || count <= 0)
      throw InvalidInput("dictionary line " + std::to_string(no) + ": bad count");
    try {
      dict.add(line.substr(0, tab), static_cast<std::uint64_t>(count));
    } catch (const InvalidInput& e) {
      throw InvalidInput("dictionary line " + std::to_string(no) + ": " + e.what());
    }
  }
  return dict;
}

Dictionary Dictionary::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse(in);
}

}  // namespace headkey
