#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

namespace stance {

struct MarkerCounts {
  int hashtags = 0;
  int mentions = 0;
  int urls = 0;
  int question_marks = 0;
};

/// Lowercased tokens plus the Twitter-marker tallies collected while
/// scanning the raw text. URLs are counted but never emitted as tokens;
/// hashtags and mentions are kept as single `#word` / `@user` tokens.
struct TokenList {
  std::vector<std::string> tokens;
  MarkerCounts marker_counts;
};

/// A whitespace-delimited chunk counts as a URL when it carries an
/// http(s) scheme or a t.co link anywhere inside it.
bool looks_like_url(const std::string& chunk);

/// Number of Unicode scalar values in a UTF-8 string (emoji count as one).
std::size_t codepoint_length(const std::string& utf8);

TokenList tokenize(const std::string& text);

/// Drops hashtags, mentions and URLs from the text, collapses whitespace
/// runs to a single space and trims the ends. Case and punctuation of the
/// remaining text are preserved.
std::string strip_markers(const std::string& text);

/// Token set used for Jaccard similarity: mentions and URLs are excluded,
/// hashtag tokens contribute their word with the leading '#' stripped.
std::set<std::string> content_token_set(const TokenList& tokens);

}  // namespace stance
