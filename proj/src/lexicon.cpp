#include "spotgeom/lexicon.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace spotgeom {

namespace {

// Lenient decoder: malformed bytes become single code points.
std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    char32_t cp = b0;
    if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    }
    if (i + extra >= s.size()) {
      extra = 0;
      cp = b0;
    }
    bool ok = true;
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      extra = 0;
      cp = b0;
    }
    out.push_back(cp);
    i += 1 + extra;
  }
  return out;
}

std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  return levenshtein(decode_utf8(a), decode_utf8(b));
}

std::size_t utf8_length(std::string_view s) { return decode_utf8(s).size(); }

Lexicon::Lexicon(std::vector<std::string> words, LexiconKind kind) : kind_(kind) {
  std::unordered_set<std::string> seen;
  for (std::string& w : words) {
    if (w.empty()) continue;
    if (seen.insert(to_lower_ascii(w)).second) words_.push_back(std::move(w));
  }
}

std::string lexicon_correct(std::string_view pred, const Lexicon& lexicon, const CorrectionOptions& options) {
  if (lexicon.empty()) throw std::invalid_argument("lexicon is empty");
  const std::u32string query = decode_utf8(to_lower_ascii(pred));

  const std::string* best = nullptr;
  std::size_t best_dist = 0;
  std::size_t best_len = 0;
  for (const std::string& w : lexicon.words()) {
    const std::u32string cand = decode_utf8(to_lower_ascii(w));
    const std::size_t d = levenshtein(query, cand);
    if (best == nullptr || d < best_dist || (d == best_dist && w < *best)) {
      best = &w;
      best_dist = d;
      best_len = cand.size();
    }
  }
  const std::size_t longer = std::max(query.size(), best_len);
  const double normalized = longer == 0 ? 0.0 : static_cast<double>(best_dist) / static_cast<double>(longer);
  if (normalized > options.max_normalized_distance) return std::string(pred);
  return *best;
}

}  // namespace spotgeom
