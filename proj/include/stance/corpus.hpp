#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stance {

enum class StanceLabel { Support = 0, Deny = 1, Query = 2, Comment = 3 };

inline constexpr std::array<StanceLabel, 4> kAllLabels = {
    StanceLabel::Support, StanceLabel::Deny, StanceLabel::Query, StanceLabel::Comment};
inline constexpr std::size_t kNumLabels = 4;

const std::string& to_string(StanceLabel label);
StanceLabel parse_label(std::string_view text);  // case-insensitive; throws on unknown
std::optional<StanceLabel> try_parse_label(std::string_view text);

struct Tweet {
  std::string id;
  std::string text;
  std::optional<std::string> in_reply_to;  // absent iff the tweet is a thread source
  std::string thread_id;
  long long retweet_count = 0;
  std::optional<StanceLabel> label;
};

/// A rooted reply tree. Tweets are stored source-first in a stable order;
/// dangling replies have already been re-parented to the source and the
/// single-tree invariant has been validated by build().
class ConversationThread {
 public:
  /// Validates and finalizes a thread: the unique tweet without in_reply_to
  /// is the source, replies whose parent id is not in the thread are
  /// re-parented to the source (with a warning), and any cycle or
  /// unreachable node is a hard error.
  static ConversationThread build(std::string event, std::vector<Tweet> tweets);

  const std::string& event() const { return event_; }
  const Tweet& source() const { return tweets_.front(); }
  const std::vector<Tweet>& tweets() const { return tweets_; }
  std::size_t size() const { return tweets_.size(); }

  bool contains(const std::string& id) const { return index_.count(id) != 0; }
  const Tweet& tweet(const std::string& id) const;   // throws on unknown id
  const Tweet* parent_of(const std::string& id) const;  // nullptr for the source
  const std::vector<std::string>& children_of(const std::string& id) const;

 private:
  std::string event_;
  std::vector<Tweet> tweets_;  // source at index 0
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::vector<std::string>> children_;
  static const std::vector<std::string> kNoChildren;
};

enum class Split { Dev, Train, Test };
const std::string& to_string(Split split);
Split parse_split(std::string_view text);

struct Dataset {
  std::vector<ConversationThread> threads;
  Split split = Split::Train;

  std::size_t tweet_count() const;
  std::size_t labeled_count() const;
};

/// Loads the official SemEval-2017 task 8 directory layout:
///   <root>/<event>/<thread-id>/source-tweet/<id>.json
///   <root>/<event>/<thread-id>/replies/<id>.json
///   <root>/<event>/<thread-id>/structure.json
/// key_path is a JSON object mapping tweet id -> label string; tweets not in
/// the key file stay unlabeled (they remain available as thread context).
Dataset load_semeval(const std::filesystem::path& root,
                     const std::filesystem::path& key_path,
                     Split split = Split::Train);

/// Loads the flat JSONL format (one object per line) with fields:
/// id, text, in_reply_to (null for sources), thread_id, retweet_count,
/// label (nullable) and optional event. Unknown fields are ignored.
Dataset load_flat(const std::filesystem::path& path, Split split = Split::Train);

/// Inverse of load_flat over the Tweet fields (plus the thread event).
void write_flat(const Dataset& dataset, const std::filesystem::path& path);

/// Number of edges from the thread source to the tweet; the source is 0.
int depth_of(const ConversationThread& thread, const std::string& tweet_id);

std::map<StanceLabel, std::size_t> class_counts(const Dataset& dataset);

/// Samples exactly per_class labeled tweets of every class, uniformly
/// without replacement and deterministically for a fixed seed. Threads are
/// kept whole for feature context; tweets that were not drawn lose their
/// label so that only sampled tweets count as instances.
Dataset balanced_subset(const Dataset& dataset, std::size_t per_class, std::uint64_t seed);

}  // namespace stance
