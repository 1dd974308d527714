#include "stance/lexicons.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>

#include "stance/util.hpp"

namespace stance {

namespace fs = std::filesystem;

namespace {

std::ifstream open_or_throw(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + what + ": " + path.string());
  return in;
}

std::runtime_error line_error(const fs::path& path, std::size_t line_no, const std::string& msg) {
  return std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + msg);
}

double parse_real(const std::string& field, const fs::path& path, std::size_t line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw line_error(path, line_no, "not a number: '" + field + "'");
  }
}

}  // namespace

bool CategoricalLexicon::has_category(const std::string& category) const {
  std::string lc = lowercase_ascii(category);
  return std::find(categories.begin(), categories.end(), lc) != categories.end();
}

bool ScoredLexicon::has_dimension(const std::string& dimension) const {
  std::string lc = lowercase_ascii(dimension);
  return std::find(dimensions.begin(), dimensions.end(), lc) != dimensions.end();
}

void WildcardDictionary::index() {
  exact_.clear();
  stems_.clear();
  max_stem_len_ = 0;
  for (const Pattern& p : patterns) {
    if (!p.pattern.empty() && p.pattern.back() == '*') {
      std::string stem = p.pattern.substr(0, p.pattern.size() - 1);
      stems_[stem].insert(p.category_ids.begin(), p.category_ids.end());
      max_stem_len_ = std::max(max_stem_len_, stem.size());
    } else {
      exact_[p.pattern].insert(p.category_ids.begin(), p.category_ids.end());
    }
  }
}

bool WildcardDictionary::has_category(const std::string& category) const {
  return category_id(category).has_value();
}

std::optional<int> WildcardDictionary::category_id(const std::string& category) const {
  std::string lc = lowercase_ascii(category);
  for (const auto& [id, name] : category_names) {
    if (name == lc) return id;
  }
  return std::nullopt;
}

bool WildcardDictionary::matches(const std::string& token, int category_id) const {
  auto it = exact_.find(token);
  if (it != exact_.end() && it->second.count(category_id)) return true;
  // Any stem of the token (including the empty one for a bare "*") may match.
  std::size_t limit = std::min(token.size(), max_stem_len_);
  for (std::size_t len = 0; len <= limit; ++len) {
    auto sit = stems_.find(token.substr(0, len));
    if (sit != stems_.end() && sit->second.count(category_id)) return true;
  }
  return false;
}

CategoricalLexicon load_categorical(const fs::path& path, const std::string& name,
                                    std::size_t expected_words) {
  auto in = open_or_throw(path, "categorical lexicon");
  CategoricalLexicon lex;
  lex.name = name;
  std::set<std::string> seen_categories;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 3) {
      throw line_error(path, line_no, "expected 'word<TAB>category<TAB>flag', got " +
                                          std::to_string(fields.size()) + " fields");
    }
    std::string word = lowercase_ascii(fields[0]);
    std::string category = lowercase_ascii(fields[1]);
    if (fields[2] != "0" && fields[2] != "1") {
      throw line_error(path, line_no, "flag must be 0 or 1, got '" + fields[2] + "'");
    }
    if (seen_categories.insert(category).second) lex.categories.push_back(category);
    if (fields[2] == "1") lex.entries[word].insert(category);
  }
  if (expected_words != 0 && lex.word_count() != expected_words) {
    warn("lexicon '" + name + "': " + std::to_string(lex.word_count()) + " words loaded, expected " +
         std::to_string(expected_words));
  }
  return lex;
}

ScoredLexicon load_scored(const fs::path& path, const std::string& name) {
  auto in = open_or_throw(path, "scored lexicon");
  ScoredLexicon lex;
  lex.name = name;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      if (fields.size() < 2) {
        throw line_error(path, line_no, "header must name the word column and at least one dimension");
      }
      for (std::size_t i = 1; i < fields.size(); ++i) {
        lex.dimensions.push_back(lowercase_ascii(fields[i]));
      }
      have_header = true;
      continue;
    }
    if (fields.size() != lex.dimensions.size() + 1) {
      throw line_error(path, line_no, "expected " + std::to_string(lex.dimensions.size() + 1) +
                                          " fields, got " + std::to_string(fields.size()));
    }
    std::vector<double> values;
    values.reserve(lex.dimensions.size());
    for (std::size_t i = 1; i < fields.size(); ++i) {
      values.push_back(parse_real(fields[i], path, line_no));
    }
    lex.entries[lowercase_ascii(fields[0])] = std::move(values);
  }
  if (!have_header) throw std::runtime_error("scored lexicon has no header: " + path.string());
  return lex;
}

WildcardDictionary load_wildcard_dic(const fs::path& path, const std::string& name) {
  auto in = open_or_throw(path, "wildcard dictionary");
  WildcardDictionary dict;
  dict.name = name;
  std::string line;
  std::size_t line_no = 0;
  int section = 0;  // 0 = before first '%', 1 = categories, 2 = patterns
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    if (stripped == "%") {
      ++section;
      if (section > 2) throw line_error(path, line_no, "unexpected extra '%' delimiter");
      continue;
    }
    if (section == 0) {
      throw line_error(path, line_no, "content before the first '%' delimiter");
    }
    auto fields = split_fields(stripped);
    if (section == 1) {
      if (fields.size() < 2) throw line_error(path, line_no, "category line needs 'id name'");
      int id = 0;
      auto [ptr, ec] = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), id);
      if (ec != std::errc() || ptr != fields[0].data() + fields[0].size()) {
        throw line_error(path, line_no, "category id is not an integer: '" + fields[0] + "'");
      }
      dict.category_names[id] = lowercase_ascii(fields[1]);
    } else {
      if (fields.size() < 2) throw line_error(path, line_no, "pattern line needs 'pattern id...'");
      WildcardDictionary::Pattern p;
      p.pattern = lowercase_ascii(fields[0]);
      for (std::size_t i = 1; i < fields.size(); ++i) {
        int id = 0;
        auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), id);
        if (ec != std::errc() || ptr != fields[i].data() + fields[i].size()) {
          throw line_error(path, line_no, "category id is not an integer: '" + fields[i] + "'");
        }
        if (!dict.category_names.count(id)) {
          throw line_error(path, line_no, "pattern references unknown category id " + std::to_string(id));
        }
        p.category_ids.insert(id);
      }
      dict.patterns.push_back(std::move(p));
    }
  }
  if (section < 2) {
    throw std::runtime_error("wildcard dictionary " + path.string() +
                             ": missing '%' delimiters around the category table");
  }
  dict.index();
  return dict;
}

std::size_t category_count(const CategoricalLexicon& lexicon, std::span<const std::string> tokens,
                           const std::string& category) {
  std::string lc = lowercase_ascii(category);
  if (!lexicon.has_category(lc)) {
    throw std::runtime_error("lexicon '" + lexicon.name + "' has no category '" + category + "'");
  }
  std::size_t count = 0;
  for (const std::string& token : tokens) {
    auto it = lexicon.entries.find(token);
    if (it != lexicon.entries.end() && it->second.count(lc)) ++count;
  }
  return count;
}

std::size_t category_count(const WildcardDictionary& dict, std::span<const std::string> tokens,
                           const std::string& category) {
  auto id = dict.category_id(category);
  if (!id) {
    throw std::runtime_error("dictionary '" + dict.name + "' has no category '" + category + "'");
  }
  std::size_t count = 0;
  for (const std::string& token : tokens) {
    if (dict.matches(token, *id)) ++count;
  }
  return count;
}

double mean_dimension(const ScoredLexicon& lexicon, std::span<const std::string> tokens,
                      const std::string& dimension) {
  std::string lc = lowercase_ascii(dimension);
  auto dim = std::find(lexicon.dimensions.begin(), lexicon.dimensions.end(), lc);
  if (dim == lexicon.dimensions.end()) {
    throw std::runtime_error("lexicon '" + lexicon.name + "' has no dimension '" + dimension + "'");
  }
  std::size_t dim_idx = static_cast<std::size_t>(dim - lexicon.dimensions.begin());
  double sum = 0.0;
  std::size_t matched = 0;
  for (const std::string& token : tokens) {
    auto it = lexicon.entries.find(token);
    if (it != lexicon.entries.end()) {
      sum += it->second[dim_idx];
      ++matched;
    }
  }
  return matched == 0 ? 0.0 : sum / static_cast<double>(matched);
}

void LexiconRegistry::set_emolex(CategoricalLexicon lex) {
  emolex_ = std::make_shared<const CategoricalLexicon>(std::move(lex));
}
void LexiconRegistry::set_emosn(CategoricalLexicon lex) {
  emosn_ = std::make_shared<const CategoricalLexicon>(std::move(lex));
}
void LexiconRegistry::set_dal(ScoredLexicon lex) {
  dal_ = std::make_shared<const ScoredLexicon>(std::move(lex));
}
void LexiconRegistry::set_anew(ScoredLexicon lex) {
  anew_ = std::make_shared<const ScoredLexicon>(std::move(lex));
}
void LexiconRegistry::set_liwc(WildcardDictionary dict) {
  dict.index();
  liwc_ = std::make_shared<const WildcardDictionary>(std::move(dict));
}

LexiconRegistry LexiconRegistry::load_dir(const fs::path& dir) {
  LexiconRegistry reg;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("lexicon directory not found: " + dir.string());
  }
  auto report_absent = [&](const char* file) {
    warn("lexicon resource '" + std::string(file) + "' not found in " + dir.string() +
         "; its features will be zero");
  };
  // Paper-reported word counts; mismatches warn but do not fail.
  if (fs::exists(dir / kEmolexFile)) {
    reg.set_emolex(load_categorical(dir / kEmolexFile, "emolex", 14182));
  } else {
    report_absent(kEmolexFile);
  }
  if (fs::exists(dir / kEmosnFile)) {
    reg.set_emosn(load_categorical(dir / kEmosnFile, "emosn", 13189));
  } else {
    report_absent(kEmosnFile);
  }
  if (fs::exists(dir / kDalFile)) {
    reg.set_dal(load_scored(dir / kDalFile, "dal"));
  } else {
    report_absent(kDalFile);
  }
  if (fs::exists(dir / kAnewFile)) {
    reg.set_anew(load_scored(dir / kAnewFile, "anew"));
  } else {
    report_absent(kAnewFile);
  }
  if (fs::exists(dir / kLiwcFile)) {
    reg.set_liwc(load_wildcard_dic(dir / kLiwcFile, "liwc"));
  } else {
    report_absent(kLiwcFile);
  }
  return reg;
}

}  // namespace stance
