#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace headkey {

inline constexpr std::size_t kMaxWordLength = 28;

/// Unigram language model: word -> frequency count, P(W) = count / total.
class Dictionary {
 public:
  struct Entry {
    std::string word;
    std::uint64_t count = 0;
  };

  /// Throws InvalidInput for words outside a..z, lengths outside 1..28,
  /// zero counts, or duplicates.
  void add(std::string word, std::uint64_t count);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::uint64_t total_count() const { return total_; }

  std::optional<std::uint64_t> count(std::string_view word) const;
  bool contains(std::string_view word) const { return count(word).has_value(); }
  double probability(std::string_view word) const;

  /// Returns a copy with every count multiplied by `factor`.
  Dictionary scaled(std::uint64_t factor) const;

  // `word<TAB>count` per line. Errors name the 1-based line number.
  static Dictionary parse(std::istream& in);
  static Dictionary load(const std::filesystem::path& path);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t total_ = 0;
};

bool is_lowercase_word(std::string_view w);

}  // namespace headkey
