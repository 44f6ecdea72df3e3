#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace spotgeom {

enum class LexiconKind { kStrong, kWeak, kGeneric };

/// Word list for recognition correction, deduplicated case-insensitively
/// (first spelling wins).
class Lexicon {
 public:
  Lexicon(std::vector<std::string> words, LexiconKind kind);

  const std::vector<std::string>& words() const { return words_; }
  LexiconKind kind() const { return kind_; }
  bool empty() const { return words_.empty(); }

 private:
  std::vector<std::string> words_;
  LexiconKind kind_;
};

/// ASCII lower-casing; other bytes pass through.
std::string to_lower_ascii(std::string_view s);

/// Levenshtein distance over UTF-8 code points.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

struct CorrectionOptions {
  /// Predictions farther than this (distance / longer length) stay unchanged.
  double max_normalized_distance = 0.5;
};

/// Closest lexicon word by case-insensitive edit distance, ties broken
/// lexicographically. Throws std::invalid_argument on an empty lexicon.
std::string lexicon_correct(std::string_view pred, const Lexicon& lexicon,
                            const CorrectionOptions& options = {});

}  // namespace spotgeom
