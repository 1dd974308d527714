#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace stance {

/// Word -> category-set lexicon (NRC association format). All words and
/// category names are lowercase.
struct CategoricalLexicon {
  std::string name;
  std::vector<std::string> categories;  // declaration order
  std::unordered_map<std::string, std::set<std::string>> entries;

  bool has_category(const std::string& category) const;
  std::size_t word_count() const { return entries.size(); }
};

/// Word -> real-vector lexicon (DAL/ANEW style); dimension names come from
/// the file header.
struct ScoredLexicon {
  std::string name;
  std::vector<std::string> dimensions;
  std::unordered_map<std::string, std::vector<double>> entries;

  bool has_dimension(const std::string& dimension) const;
  std::size_t word_count() const { return entries.size(); }
};

/// LIWC-style dictionary: '%'-delimited category table followed by
/// pattern lines. A pattern ending in '*' matches any token with the stem
/// as prefix; otherwise the match is exact.
class WildcardDictionary {
 public:
  struct Pattern {
    std::string pattern;  // as written, possibly ending in '*'
    std::set<int> category_ids;
  };

  std::string name;
  std::map<int, std::string> category_names;  // id -> lowercase name
  std::vector<Pattern> patterns;

  void index();  // rebuild lookup tables after patterns/categories change
  bool has_category(const std::string& category) const;
  std::optional<int> category_id(const std::string& category) const;
  /// True when some pattern carrying category_id matches the token.
  bool matches(const std::string& token, int category_id) const;

 private:
  std::unordered_map<std::string, std::set<int>> exact_;
  std::unordered_map<std::string, std::set<int>> stems_;  // '*' patterns, by stem
  std::size_t max_stem_len_ = 0;
};

CategoricalLexicon load_categorical(const std::filesystem::path& path, const std::string& name,
                                    std::size_t expected_words = 0);
ScoredLexicon load_scored(const std::filesystem::path& path, const std::string& name);
WildcardDictionary load_wildcard_dic(const std::filesystem::path& path, const std::string& name);

/// Tokens (with multiplicity) carrying the category. Unknown category -> error.
std::size_t category_count(const CategoricalLexicon& lexicon, std::span<const std::string> tokens,
                           const std::string& category);
std::size_t category_count(const WildcardDictionary& dict, std::span<const std::string> tokens,
                           const std::string& category);

/// Mean of the dimension over matched tokens; 0.0 when nothing matches.
/// Unknown dimension -> error.
double mean_dimension(const ScoredLexicon& lexicon, std::span<const std::string> tokens,
                      const std::string& dimension);

/// The five affective resources behind the feature extractors. Any resource
/// may be absent (gated licensing); loading warns once per missing file and
/// the affective extractor emits zeros for that resource's features.
class LexiconRegistry {
 public:
  static constexpr const char* kEmolexFile = "emolex.txt";
  static constexpr const char* kEmosnFile = "emosn.txt";
  static constexpr const char* kDalFile = "dal.tsv";
  static constexpr const char* kAnewFile = "anew.tsv";
  static constexpr const char* kLiwcFile = "liwc.dic";

  LexiconRegistry() = default;

  /// Loads every resource file present under dir (see k*File names).
  static LexiconRegistry load_dir(const std::filesystem::path& dir);
  /// Registry with no resources at all (lexicon-free configs still work).
  static LexiconRegistry empty() { return LexiconRegistry(); }

  const CategoricalLexicon* emolex() const { return emolex_.get(); }
  const CategoricalLexicon* emosn() const { return emosn_.get(); }
  const ScoredLexicon* dal() const { return dal_.get(); }
  const ScoredLexicon* anew() const { return anew_.get(); }
  const WildcardDictionary* liwc() const { return liwc_.get(); }

  void set_emolex(CategoricalLexicon lex);
  void set_emosn(CategoricalLexicon lex);
  void set_dal(ScoredLexicon lex);
  void set_anew(ScoredLexicon lex);
  void set_liwc(WildcardDictionary dict);

 private:
  std::shared_ptr<const CategoricalLexicon> emolex_, emosn_;
  std::shared_ptr<const ScoredLexicon> dal_, anew_;
  std::shared_ptr<const WildcardDictionary> liwc_;
};

}  // namespace stance
