#include "stance/textproc.hpp"

#include "stance/util.hpp"

namespace stance {

namespace {

bool is_word_char(unsigned char c) {
  // Non-ASCII bytes stay inside tokens so accented words and emoji survive
  // as units; ASCII punctuation acts as a boundary and is never emitted.
  if (c >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool contains_ci(const std::string& haystack, const char* needle) {
  return lowercase_ascii(haystack).find(needle) != std::string::npos;
}

}  // namespace

bool looks_like_url(const std::string& chunk) {
  return contains_ci(chunk, "http://") || contains_ci(chunk, "https://") ||
         contains_ci(chunk, "t.co/");
}

std::size_t codepoint_length(const std::string& utf8) {
  std::size_t n = 0;
  for (unsigned char c : utf8) {
    if ((c & 0xC0) != 0x80) ++n;  // count non-continuation bytes
  }
  return n;
}

TokenList tokenize(const std::string& text) {
  TokenList out;
  for (char c : text) {
    if (c == '?') ++out.marker_counts.question_marks;
  }

  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    if (i >= n) break;
    std::size_t start = i;
    while (i < n && text[i] != ' ' && text[i] != '\t' && text[i] != '\n' && text[i] != '\r') ++i;
    std::string chunk = text.substr(start, i - start);

    if (looks_like_url(chunk)) {
      ++out.marker_counts.urls;
      continue;
    }

    std::size_t j = 0;
    while (j < chunk.size()) {
      unsigned char c = static_cast<unsigned char>(chunk[j]);
      if ((c == '#' || c == '@') && j + 1 < chunk.size() &&
          is_word_char(static_cast<unsigned char>(chunk[j + 1]))) {
        std::size_t k = j + 1;
        while (k < chunk.size() && is_word_char(static_cast<unsigned char>(chunk[k]))) ++k;
        out.tokens.push_back(lowercase_ascii(chunk.substr(j, k - j)));
        if (c == '#') {
          ++out.marker_counts.hashtags;
        } else {
          ++out.marker_counts.mentions;
        }
        j = k;
      } else if (is_word_char(c)) {
        std::size_t k = j;
        while (k < chunk.size() && is_word_char(static_cast<unsigned char>(chunk[k]))) ++k;
        out.tokens.push_back(lowercase_ascii(chunk.substr(j, k - j)));
        j = k;
      } else {
        ++j;  // punctuation boundary
      }
    }
  }
  return out;
}

std::string strip_markers(const std::string& text) {
  std::string kept;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r') {
      kept.push_back(' ');
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && text[i] != ' ' && text[i] != '\t' && text[i] != '\n' && text[i] != '\r') ++i;
    std::string chunk = text.substr(start, i - start);
    if (looks_like_url(chunk)) continue;

    std::size_t j = 0;
    while (j < chunk.size()) {
      unsigned char c = static_cast<unsigned char>(chunk[j]);
      if ((c == '#' || c == '@') && j + 1 < chunk.size() &&
          is_word_char(static_cast<unsigned char>(chunk[j + 1]))) {
        std::size_t k = j + 1;
        while (k < chunk.size() && is_word_char(static_cast<unsigned char>(chunk[k]))) ++k;
        j = k;  // drop the marker token
      } else {
        kept.push_back(chunk[j]);
        ++j;
      }
    }
  }

  // collapse whitespace runs, trim ends
  std::string out;
  bool pending_space = false;
  for (char c : kept) {
    if (c == ' ') {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::set<std::string> content_token_set(const TokenList& tokens) {
  std::set<std::string> out;
  for (const std::string& t : tokens.tokens) {
    if (t.empty()) continue;
    if (t[0] == '@') continue;
    if (looks_like_url(t)) continue;
    if (t[0] == '#') {
      if (t.size() > 1) out.insert(t.substr(1));
    } else {
      out.insert(t);
    }
  }
  return out;
}

}  // namespace stance
