#include "stance/features.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "stance/util.hpp"

namespace stance {

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const std::string& s : a) {
    if (b.count(s)) ++intersection;
  }
  std::size_t union_size = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(union_size);
}

namespace {

enum class Resource { None, Emolex, Emosn, Dal, Anew, Liwc };

struct CatalogEntry {
  const char* name;
  Resource resource;
  const char* key;  // lexicon category or dimension
};

// Emolex: the eight Plutchik emotions then polarity; EmoSN: the six Ekman
// emotions; DAL and ANEW dimensions in the order their models list them.
const std::vector<CatalogEntry>& affective_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"emolex_anger", Resource::Emolex, "anger"},
      {"emolex_anticipation", Resource::Emolex, "anticipation"},
      {"emolex_disgust", Resource::Emolex, "disgust"},
      {"emolex_fear", Resource::Emolex, "fear"},
      {"emolex_joy", Resource::Emolex, "joy"},
      {"emolex_sadness", Resource::Emolex, "sadness"},
      {"emolex_surprise", Resource::Emolex, "surprise"},
      {"emolex_trust", Resource::Emolex, "trust"},
      {"emolex_positive", Resource::Emolex, "positive"},
      {"emolex_negative", Resource::Emolex, "negative"},
      {"emosn_anger", Resource::Emosn, "anger"},
      {"emosn_disgust", Resource::Emosn, "disgust"},
      {"emosn_fear", Resource::Emosn, "fear"},
      {"emosn_joy", Resource::Emosn, "joy"},
      {"emosn_sadness", Resource::Emosn, "sadness"},
      {"emosn_surprise", Resource::Emosn, "surprise"},
      {"dal_pleasantness", Resource::Dal, "pleasantness"},
      {"dal_activation", Resource::Dal, "activation"},
      {"dal_imagery", Resource::Dal, "imagery"},
      {"anew_valence", Resource::Anew, "valence"},
      {"anew_arousal", Resource::Anew, "arousal"},
      {"anew_dominance", Resource::Anew, "dominance"},
      {"liwc_posemo", Resource::Liwc, "posemo"},
      {"liwc_negemo", Resource::Liwc, "negemo"},
  };
  return entries;
}

const std::vector<CatalogEntry>& dialogue_act_catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"liwc_assent", Resource::Liwc, "assent"},
      {"liwc_certain", Resource::Liwc, "certain"},
      {"liwc_affect", Resource::Liwc, "affect"},
      {"liwc_negate", Resource::Liwc, "negate"},
      {"liwc_inhib", Resource::Liwc, "inhib"},
      {"liwc_you", Resource::Liwc, "you"},
      {"liwc_cause", Resource::Liwc, "cause"},
      {"liwc_future", Resource::Liwc, "future"},
      {"liwc_sad", Resource::Liwc, "sad"},
      {"liwc_insight", Resource::Liwc, "insight"},
      {"liwc_cogmech", Resource::Liwc, "cogmech"},
  };
  return entries;
}

const std::array<const char*, 6> kStructuralNames = {
    "retweet_count", "question_mark",     "question_mark_count",
    "hashtag_presence", "text_length", "url_count"};
const std::array<const char*, 3> kConversationalNames = {
    "similarity_to_source", "similarity_to_replied", "tweet_depth"};

bool selected(const FeatureConfig& config, const CatalogEntry& entry) {
  return !config.selection || config.selection->count(entry.name) != 0;
}

double lexicon_feature(const CatalogEntry& entry, const TokenList& tokens,
                       const LexiconRegistry& registry) {
  switch (entry.resource) {
    case Resource::Emolex:
      return registry.emolex()
                 ? static_cast<double>(category_count(*registry.emolex(), tokens.tokens, entry.key))
                 : 0.0;
    case Resource::Emosn:
      return registry.emosn()
                 ? static_cast<double>(category_count(*registry.emosn(), tokens.tokens, entry.key))
                 : 0.0;
    case Resource::Dal:
      return registry.dal() ? mean_dimension(*registry.dal(), tokens.tokens, entry.key) : 0.0;
    case Resource::Anew:
      return registry.anew() ? mean_dimension(*registry.anew(), tokens.tokens, entry.key) : 0.0;
    case Resource::Liwc:
      return registry.liwc()
                 ? static_cast<double>(category_count(*registry.liwc(), tokens.tokens, entry.key))
                 : 0.0;
    case Resource::None:
      break;
  }
  throw std::logic_error("unreachable");
}

std::array<double, 6> structural_core(const Tweet& tweet, const TokenList& tokens) {
  const MarkerCounts& m = tokens.marker_counts;
  return {static_cast<double>(tweet.retweet_count),
          m.question_marks > 0 ? 1.0 : 0.0,
          static_cast<double>(m.question_marks),
          m.hashtags > 0 ? 1.0 : 0.0,
          static_cast<double>(codepoint_length(strip_markers(tweet.text))),
          static_cast<double>(m.urls)};
}

}  // namespace

FeatureConfig FeatureConfig::by_name(const std::string& name) {
  std::string key = lowercase_ascii(name);
  FeatureConfig c;
  auto with = [&](bool s, bool b, bool a, bool d) {
    c.structural = s;
    c.conversational = b;
    c.affective = a;
    c.dialogue_act = d;
  };
  if (key == "a") {
    with(true, false, false, false);
  } else if (key == "b") {
    with(false, true, false, false);
  } else if (key == "c") {
    with(false, false, true, false);
  } else if (key == "d") {
    with(false, false, false, true);
  } else if (key == "e") {
    with(true, true, false, false);
  } else if (key == "f") {
    with(true, false, true, false);
  } else if (key == "g") {
    with(true, false, false, true);
  } else if (key == "h") {
    with(true, true, true, false);
  } else if (key == "i") {
    with(true, true, false, true);
  } else if (key == "j") {
    with(true, false, true, true);
  } else if (key == "k") {
    with(true, true, true, true);
  } else if (key == "best17") {
    with(true, true, true, true);
    c.selection = std::set<std::string>{"dal_activation", "anew_dominance", "emolex_negative",
                                        "emolex_fear",    "liwc_assent",    "liwc_cause",
                                        "liwc_certain",   "liwc_sad"};
  } else {
    throw std::runtime_error("unknown feature config '" + name + "' (expected A..K or BEST17)");
  }
  c.name = (key == "best17") ? "BEST17" : std::string(1, static_cast<char>(toupper(key[0])));
  return c;
}

const std::vector<std::string>& FeatureConfig::ablation_names() {
  static const std::vector<std::string> names = {"A", "B", "C", "D", "E", "F",
                                                 "G", "H", "I", "J", "K"};
  return names;
}

std::vector<std::string> FeatureConfig::schema() const {
  std::vector<std::string> out;
  if (structural) out.insert(out.end(), kStructuralNames.begin(), kStructuralNames.end());
  if (conversational) {
    out.insert(out.end(), kConversationalNames.begin(), kConversationalNames.end());
  }
  if (affective) {
    for (const auto& entry : affective_catalog()) {
      if (selected(*this, entry)) out.push_back(entry.name);
    }
  }
  if (dialogue_act) {
    for (const auto& entry : dialogue_act_catalog()) {
      if (selected(*this, entry)) out.push_back(entry.name);
    }
  }
  return out;
}

std::array<double, 6> structural_features(const Tweet& tweet) {
  return structural_core(tweet, tokenize(tweet.text));
}

std::array<double, 3> conversational_features(const Tweet& tweet, const ConversationThread& thread) {
  const Tweet& in_thread = thread.tweet(tweet.id);  // throws when not a member
  if (!in_thread.in_reply_to) {
    return {1.0, 1.0, 0.0};  // source compared with itself
  }
  auto own = content_token_set(tokenize(in_thread.text));
  auto source = content_token_set(tokenize(thread.source().text));
  const Tweet* parent = thread.parent_of(in_thread.id);
  auto replied = content_token_set(tokenize(parent->text));
  return {jaccard(own, source), jaccard(own, replied),
          static_cast<double>(depth_of(thread, in_thread.id))};
}

std::vector<double> affective_features(const TokenList& tokens, const LexiconRegistry& registry) {
  std::vector<double> out;
  out.reserve(affective_catalog().size());
  for (const auto& entry : affective_catalog()) {
    out.push_back(lexicon_feature(entry, tokens, registry));
  }
  return out;
}

std::vector<double> dialogue_act_features(const TokenList& tokens, const WildcardDictionary& liwc) {
  std::vector<double> out;
  out.reserve(dialogue_act_catalog().size());
  for (const auto& entry : dialogue_act_catalog()) {
    out.push_back(static_cast<double>(category_count(liwc, tokens.tokens, entry.key)));
  }
  return out;
}

FeatureVector extract(const Tweet& tweet, const ConversationThread& thread,
                      const LexiconRegistry& registry, const FeatureConfig& config) {
  TokenList tokens = tokenize(tweet.text);
  FeatureVector vec;
  if (config.structural) {
    auto s = structural_core(tweet, tokens);
    vec.values.insert(vec.values.end(), s.begin(), s.end());
  }
  if (config.conversational) {
    auto c = conversational_features(tweet, thread);
    vec.values.insert(vec.values.end(), c.begin(), c.end());
  }
  if (config.affective) {
    for (const auto& entry : affective_catalog()) {
      if (selected(config, entry)) vec.values.push_back(lexicon_feature(entry, tokens, registry));
    }
  }
  if (config.dialogue_act) {
    for (const auto& entry : dialogue_act_catalog()) {
      if (selected(config, entry)) vec.values.push_back(lexicon_feature(entry, tokens, registry));
    }
  }
  vec.schema = std::make_shared<const std::vector<std::string>>(config.schema());
  return vec;
}

std::vector<std::string> validate_registry(const LexiconRegistry& registry,
                                           const FeatureConfig& config) {
  std::vector<std::string> problems;
  std::set<std::string> reported;
  auto missing_resource = [&](const std::string& res) {
    if (reported.insert(res).second) problems.push_back("resource '" + res + "' is absent");
  };
  auto check = [&](const CatalogEntry& entry) {
    switch (entry.resource) {
      case Resource::Emolex:
        if (!registry.emolex()) {
          missing_resource("emolex");
        } else if (!registry.emolex()->has_category(entry.key)) {
          problems.push_back("emolex lacks category '" + std::string(entry.key) + "'");
        }
        break;
      case Resource::Emosn:
        if (!registry.emosn()) {
          missing_resource("emosn");
        } else if (!registry.emosn()->has_category(entry.key)) {
          problems.push_back("emosn lacks category '" + std::string(entry.key) + "'");
        }
        break;
      case Resource::Dal:
        if (!registry.dal()) {
          missing_resource("dal");
        } else if (!registry.dal()->has_dimension(entry.key)) {
          problems.push_back("dal lacks dimension '" + std::string(entry.key) + "'");
        }
        break;
      case Resource::Anew:
        if (!registry.anew()) {
          missing_resource("anew");
        } else if (!registry.anew()->has_dimension(entry.key)) {
          problems.push_back("anew lacks dimension '" + std::string(entry.key) + "'");
        }
        break;
      case Resource::Liwc:
        if (!registry.liwc()) {
          missing_resource("liwc");
        } else if (!registry.liwc()->has_category(entry.key)) {
          problems.push_back("liwc lacks category '" + std::string(entry.key) + "'");
        }
        break;
      case Resource::None:
        break;
    }
  };
  if (config.affective) {
    for (const auto& entry : affective_catalog()) {
      if (selected(config, entry)) check(entry);
    }
  }
  if (config.dialogue_act) {
    for (const auto& entry : dialogue_act_catalog()) {
      if (selected(config, entry)) check(entry);
    }
  }
  return problems;
}

Scaler fit_scaler(const std::vector<FeatureVector>& matrix) {
  if (matrix.empty()) throw std::runtime_error("fit_scaler: empty matrix");
  const auto& first_schema = matrix.front().schema;
  std::size_t dim = matrix.front().values.size();
  for (const auto& row : matrix) {
    bool same = row.values.size() == dim &&
                (row.schema == first_schema ||
                 (row.schema && first_schema && *row.schema == *first_schema));
    if (!same) throw std::runtime_error("fit_scaler: schema mismatch across rows");
  }

  Scaler scaler;
  if (first_schema) scaler.schema = *first_schema;
  scaler.mean.assign(dim, 0.0);
  scaler.stddev.assign(dim, 0.0);
  std::vector<double> lo(matrix.front().values), hi(matrix.front().values);
  const double n = static_cast<double>(matrix.size());
  for (const auto& row : matrix) {
    for (std::size_t j = 0; j < dim; ++j) {
      scaler.mean[j] += row.values[j];
      lo[j] = std::min(lo[j], row.values[j]);
      hi[j] = std::max(hi[j], row.values[j]);
    }
  }
  for (std::size_t j = 0; j < dim; ++j) scaler.mean[j] /= n;
  for (const auto& row : matrix) {
    for (std::size_t j = 0; j < dim; ++j) {
      double d = row.values[j] - scaler.mean[j];
      scaler.stddev[j] += d * d;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    // a truly constant column is flagged with stddev 0 even when the mean
    // picked up rounding noise
    scaler.stddev[j] = lo[j] == hi[j] ? 0.0 : std::sqrt(scaler.stddev[j] / n);
  }
  return scaler;
}

FeatureVector apply_scaler(const Scaler& scaler, const FeatureVector& vec) {
  if (vec.values.size() != scaler.mean.size()) {
    throw std::runtime_error("apply_scaler: expected " + std::to_string(scaler.mean.size()) +
                             " features, got " + std::to_string(vec.values.size()));
  }
  if (vec.schema && !scaler.schema.empty() && *vec.schema != scaler.schema) {
    throw std::runtime_error("apply_scaler: feature schema mismatch");
  }
  FeatureVector out;
  out.schema = vec.schema;
  out.values.resize(vec.values.size());
  for (std::size_t j = 0; j < vec.values.size(); ++j) {
    out.values[j] =
        scaler.stddev[j] == 0.0 ? 0.0 : (vec.values[j] - scaler.mean[j]) / scaler.stddev[j];
  }
  return out;
}

Instances labeled_instances(const Dataset& dataset) {
  Instances out;
  for (const auto& thread : dataset.threads) {
    for (const Tweet& tweet : thread.tweets()) {
      if (tweet.label) {
        out.tweets.push_back(&tweet);
        out.threads.push_back(&thread);
        out.labels.push_back(*tweet.label);
      }
    }
  }
  return out;
}

std::vector<FeatureVector> extract_all(const Instances& instances, const LexiconRegistry& registry,
                                       const FeatureConfig& config, int workers) {
  auto schema = std::make_shared<const std::vector<std::string>>(config.schema());
  std::vector<FeatureVector> matrix(instances.size());
  parallel_for(instances.size(), workers, [&](std::size_t i) {
    matrix[i] = extract(*instances.tweets[i], *instances.threads[i], registry, config);
    matrix[i].schema = schema;  // share one schema across the matrix
  });
  return matrix;
}

}  // namespace stance
