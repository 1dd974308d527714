#pragma once

#include <array>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/lexicons.hpp"
#include "stance/textproc.hpp"

namespace stance {

/// |a∩b| / |a∪b|; 1.0 when both sets are empty, 0.0 when exactly one is.
double jaccard(const std::set<std::string>& a, const std::set<std::string>& b);

/// Named feature-group selection. The ablation sets A..K select whole
/// groups; BEST17 additionally narrows the lexicon-backed features to the
/// eight survivors of the tuning run.
struct FeatureConfig {
  std::string name;
  bool structural = false;
  bool conversational = false;
  bool affective = false;
  bool dialogue_act = false;
  /// When set, only these affective/dialogue-act feature names are emitted
  /// (structural/conversational groups are never filtered).
  std::optional<std::set<std::string>> selection;

  /// A..K and BEST17, case-insensitive.
  static FeatureConfig by_name(const std::string& name);
  /// The ablation rows in order: A,B,C,D,E,F,G,H,I,J,K.
  static const std::vector<std::string>& ablation_names();

  /// Ordered feature names; order is fixed as structural -> conversational
  /// -> affective -> dialogue-act.
  std::vector<std::string> schema() const;
  std::size_t dimension() const { return schema().size(); }
};

struct FeatureVector {
  std::vector<double> values;
  std::shared_ptr<const std::vector<std::string>> schema;
};

/// Order: retweet_count, question_mark, question_mark_count,
/// hashtag_presence, text_length, url_count.
std::array<double, 6> structural_features(const Tweet& tweet);

/// Order: similarity_to_source, similarity_to_replied, tweet_depth.
/// For the source tweet both similarities are 1.0 and depth is 0.
std::array<double, 3> conversational_features(const Tweet& tweet, const ConversationThread& thread);

/// The full affective group (24 values): Emolex 10 counts, EmoSN 6 counts,
/// DAL 3 means, ANEW 3 means, LIWC PosEMO/NegEMO counts. Features of an
/// absent resource are 0 (the registry warned at load time).
std::vector<double> affective_features(const TokenList& tokens, const LexiconRegistry& registry);

/// The 11 LIWC dialogue-act counts in fixed order: Assent, Certain, Affect,
/// Negate, Inhib, You, Cause, Future, Sad, Insight, Cogmech.
std::vector<double> dialogue_act_features(const TokenList& tokens, const WildcardDictionary& liwc);

FeatureVector extract(const Tweet& tweet, const ConversationThread& thread,
                      const LexiconRegistry& registry, const FeatureConfig& config);

/// Resources/categories/dimensions the config needs but the registry cannot
/// serve; empty means the config is fully runnable.
std::vector<std::string> validate_registry(const LexiconRegistry& registry,
                                           const FeatureConfig& config);

/// Per-feature mean and population standard deviation fitted on training
/// data; constant features (stddev 0) scale to 0.
struct Scaler {
  std::vector<std::string> schema;
  std::vector<double> mean;
  std::vector<double> stddev;
};

Scaler fit_scaler(const std::vector<FeatureVector>& matrix);
FeatureVector apply_scaler(const Scaler& scaler, const FeatureVector& vec);

/// The labeled tweets of a dataset in deterministic (thread, tweet) order.
struct Instances {
  std::vector<const Tweet*> tweets;
  std::vector<const ConversationThread*> threads;
  std::vector<StanceLabel> labels;
  std::size_t size() const { return tweets.size(); }
};
Instances labeled_instances(const Dataset& dataset);

std::vector<FeatureVector> extract_all(const Instances& instances, const LexiconRegistry& registry,
                                       const FeatureConfig& config, int workers = 1);

}  // namespace stance
