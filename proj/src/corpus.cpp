#include "stance/corpus.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "stance/util.hpp"

namespace stance {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string& to_string(StanceLabel label) {
  static const std::array<std::string, 4> names = {"support", "deny", "query", "comment"};
  return names[static_cast<std::size_t>(label)];
}

std::optional<StanceLabel> try_parse_label(std::string_view text) {
  std::string lc = lowercase_ascii(text);
  for (StanceLabel label : kAllLabels) {
    if (lc == to_string(label)) return label;
  }
  return std::nullopt;
}

StanceLabel parse_label(std::string_view text) {
  auto label = try_parse_label(text);
  if (!label) throw std::runtime_error("unknown stance label: '" + std::string(text) + "'");
  return *label;
}

const std::string& to_string(Split split) {
  static const std::array<std::string, 3> names = {"dev", "train", "test"};
  return names[static_cast<std::size_t>(split)];
}

Split parse_split(std::string_view text) {
  std::string lc = lowercase_ascii(text);
  if (lc == "dev") return Split::Dev;
  if (lc == "train") return Split::Train;
  if (lc == "test") return Split::Test;
  throw std::runtime_error("unknown split: '" + std::string(text) + "'");
}

const std::vector<std::string> ConversationThread::kNoChildren;

ConversationThread ConversationThread::build(std::string event, std::vector<Tweet> tweets) {
  if (tweets.empty()) throw std::runtime_error("thread '" + event + "' has no tweets");

  const std::string thread_id = tweets.front().thread_id;
  std::size_t source_pos = tweets.size();
  for (std::size_t i = 0; i < tweets.size(); ++i) {
    if (!tweets[i].in_reply_to) {
      if (source_pos != tweets.size()) {
        throw std::runtime_error("thread '" + thread_id + "' has multiple source tweets ('" +
                                 tweets[source_pos].id + "' and '" + tweets[i].id + "')");
      }
      source_pos = i;
    }
  }
  if (source_pos == tweets.size()) {
    throw std::runtime_error("thread '" + thread_id + "' has no source tweet");
  }
  if (source_pos != 0) std::swap(tweets[0], tweets[source_pos]);

  ConversationThread thread;
  thread.event_ = std::move(event);
  thread.tweets_ = std::move(tweets);
  for (std::size_t i = 0; i < thread.tweets_.size(); ++i) {
    auto [it, fresh] = thread.index_.emplace(thread.tweets_[i].id, i);
    (void)it;
    if (!fresh) {
      throw std::runtime_error("duplicate tweet id '" + thread.tweets_[i].id + "' in thread '" +
                               thread_id + "'");
    }
  }

  const std::string& source_id = thread.tweets_.front().id;
  for (std::size_t i = 1; i < thread.tweets_.size(); ++i) {
    Tweet& t = thread.tweets_[i];
    if (!thread.index_.count(*t.in_reply_to)) {
      warn("thread '" + thread_id + "': tweet '" + t.id + "' replies to missing tweet '" +
           *t.in_reply_to + "'; re-parenting to the source");
      t.in_reply_to = source_id;
    }
    thread.children_[*t.in_reply_to].push_back(t.id);
  }

  // Every node must be reachable from the source; leftovers mean a cycle.
  std::size_t reached = 1;
  std::deque<std::string> queue{source_id};
  while (!queue.empty()) {
    auto it = thread.children_.find(queue.front());
    queue.pop_front();
    if (it == thread.children_.end()) continue;
    for (const std::string& child : it->second) {
      ++reached;
      queue.push_back(child);
    }
  }
  if (reached != thread.tweets_.size()) {
    throw std::runtime_error("thread '" + thread_id + "' is not a tree (reply cycle detected)");
  }
  return thread;
}

const Tweet& ConversationThread::tweet(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::runtime_error("tweet '" + id + "' not in thread '" + source().id + "'");
  }
  return tweets_[it->second];
}

const Tweet* ConversationThread::parent_of(const std::string& id) const {
  const Tweet& t = tweet(id);
  if (!t.in_reply_to) return nullptr;
  return &tweet(*t.in_reply_to);
}

const std::vector<std::string>& ConversationThread::children_of(const std::string& id) const {
  if (!contains(id)) {
    throw std::runtime_error("tweet '" + id + "' not in thread '" + source().id + "'");
  }
  auto it = children_.find(id);
  return it == children_.end() ? kNoChildren : it->second;
}

std::size_t Dataset::tweet_count() const {
  std::size_t n = 0;
  for (const auto& t : threads) n += t.size();
  return n;
}

std::size_t Dataset::labeled_count() const {
  std::size_t n = 0;
  for (const auto& thread : threads) {
    for (const auto& tweet : thread.tweets()) {
      if (tweet.label) ++n;
    }
  }
  return n;
}

namespace {

json parse_json_file(const fs::path& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + what + ": " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("unparsable " + what + " " + path.string() + ": " + e.what());
  }
}

/// Reads one tweet file from the official layout. The filename stem is the
/// tweet id (it is what structure.json and the key files reference).
Tweet read_semeval_tweet(const fs::path& path, const std::string& thread_id) {
  json j = parse_json_file(path, "tweet file");
  Tweet t;
  t.id = path.stem().string();
  t.thread_id = thread_id;
  if (j.contains("text") && j["text"].is_string()) t.text = j["text"].get<std::string>();
  if (j.contains("retweet_count") && j["retweet_count"].is_number()) {
    t.retweet_count = j["retweet_count"].get<long long>();
  }
  if (j.contains("in_reply_to_status_id_str") && j["in_reply_to_status_id_str"].is_string()) {
    t.in_reply_to = j["in_reply_to_status_id_str"].get<std::string>();
  } else if (j.contains("in_reply_to_status_id") && j["in_reply_to_status_id"].is_number()) {
    t.in_reply_to = std::to_string(j["in_reply_to_status_id"].get<long long>());
  }
  return t;
}

/// Walks a structure.json subtree, recording parent links in reply order.
void walk_structure(const json& node, const std::string& parent,
                    std::vector<std::pair<std::string, std::string>>& edges) {
  if (!node.is_object()) return;  // leaves are [] or null
  for (auto it = node.begin(); it != node.end(); ++it) {
    edges.emplace_back(it.key(), parent);
    walk_structure(it.value(), it.key(), edges);
  }
}

std::unordered_map<std::string, StanceLabel> load_key_file(const fs::path& key_path) {
  json j = parse_json_file(key_path, "key file");
  if (!j.is_object()) throw std::runtime_error("key file is not a JSON object: " + key_path.string());
  std::unordered_map<std::string, StanceLabel> out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_string()) {
      throw std::runtime_error("key file " + key_path.string() + ": value for tweet '" + it.key() +
                               "' is not a string");
    }
    out[it.key()] = parse_label(it.value().get<std::string>());
  }
  return out;
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) out.push_back(entry.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Dataset load_semeval(const fs::path& root, const fs::path& key_path, Split split) {
  if (!fs::is_directory(root)) {
    throw std::runtime_error("dataset root is not a directory: " + root.string());
  }
  auto key = load_key_file(key_path);

  Dataset dataset;
  dataset.split = split;
  for (const fs::path& event_dir : sorted_entries(root)) {
    if (!fs::is_directory(event_dir)) continue;
    const std::string event = event_dir.filename().string();
    for (const fs::path& thread_dir : sorted_entries(event_dir)) {
      if (!fs::is_directory(thread_dir)) continue;
      const std::string thread_id = thread_dir.filename().string();

      fs::path structure_path = thread_dir / "structure.json";
      if (!fs::exists(structure_path)) {
        throw std::runtime_error("thread '" + thread_id + "': missing structure.json");
      }
      json structure;
      try {
        structure = parse_json_file(structure_path, "structure file");
      } catch (const std::exception& e) {
        throw std::runtime_error("thread '" + thread_id + "': " + e.what());
      }

      fs::path source_dir = thread_dir / "source-tweet";
      if (!fs::is_directory(source_dir)) {
        throw std::runtime_error("thread '" + thread_id + "': missing source-tweet directory");
      }
      std::vector<Tweet> tweets;
      std::unordered_map<std::string, std::size_t> by_id;
      for (const fs::path& p : sorted_entries(source_dir)) {
        if (p.extension() != ".json") continue;
        tweets.push_back(read_semeval_tweet(p, thread_id));
      }
      if (tweets.size() != 1) {
        throw std::runtime_error("thread '" + thread_id + "': expected exactly one source tweet, found " +
                                 std::to_string(tweets.size()));
      }
      tweets.front().in_reply_to.reset();
      const std::string source_id = tweets.front().id;
      by_id[source_id] = 0;

      fs::path replies_dir = thread_dir / "replies";
      if (fs::is_directory(replies_dir)) {
        for (const fs::path& p : sorted_entries(replies_dir)) {
          if (p.extension() != ".json") continue;
          Tweet t = read_semeval_tweet(p, thread_id);
          by_id[t.id] = tweets.size();
          tweets.push_back(std::move(t));
        }
      }

      if (!structure.is_object() || structure.size() != 1 || !structure.contains(source_id)) {
        throw std::runtime_error("thread '" + thread_id +
                                 "': structure.json root does not match the source tweet");
      }
      std::vector<std::pair<std::string, std::string>> edges;
      walk_structure(structure[source_id], source_id, edges);

      // The tree mirrors structure.json: parents come from the structure
      // edges. Reply files the structure does not mention keep their own
      // in_reply_to and fall back to ConversationThread's dangling repair.
      for (const auto& [child, parent] : edges) {
        auto it = by_id.find(child);
        if (it == by_id.end()) {
          throw std::runtime_error("thread '" + thread_id + "': structure.json references tweet '" +
                                   child + "' with no file on disk");
        }
        if (it->second != 0) tweets[it->second].in_reply_to = parent;
      }

      for (Tweet& t : tweets) {
        auto it = key.find(t.id);
        if (it != key.end()) t.label = it->second;
      }
      dataset.threads.push_back(ConversationThread::build(event, std::move(tweets)));
    }
  }
  return dataset;
}

Dataset load_flat(const fs::path& path, Split split) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open flat dataset: " + path.string());

  // thread_id -> (event, tweets in line order)
  std::vector<std::string> thread_order;
  std::unordered_map<std::string, std::pair<std::string, std::vector<Tweet>>> by_thread;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty()) continue;
    json j;
    try {
      j = json::parse(stripped);
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": invalid JSON: " + e.what());
    }
    Tweet t;
    try {
      t.id = j.at("id").get<std::string>();
      t.text = j.value("text", std::string());
      t.thread_id = j.at("thread_id").get<std::string>();
      if (j.contains("in_reply_to") && !j["in_reply_to"].is_null()) {
        t.in_reply_to = j["in_reply_to"].get<std::string>();
      }
      if (j.contains("retweet_count") && !j["retweet_count"].is_null()) {
        t.retweet_count = j["retweet_count"].get<long long>();
      }
      if (j.contains("label") && !j["label"].is_null()) {
        t.label = parse_label(j["label"].get<std::string>());
      }
    } catch (const json::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
    std::string event = j.value("event", std::string());
    auto [it, fresh] = by_thread.try_emplace(t.thread_id);
    if (fresh) {
      thread_order.push_back(t.thread_id);
      it->second.first = event;
    } else if (it->second.first.empty()) {
      it->second.first = event;
    }
    it->second.second.push_back(std::move(t));
  }

  Dataset dataset;
  dataset.split = split;
  for (const std::string& tid : thread_order) {
    auto& [event, tweets] = by_thread.at(tid);
    dataset.threads.push_back(ConversationThread::build(event, std::move(tweets)));
  }
  return dataset;
}

void write_flat(const Dataset& dataset, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write flat dataset: " + path.string());
  for (const auto& thread : dataset.threads) {
    for (const Tweet& t : thread.tweets()) {
      json j;
      j["id"] = t.id;
      j["text"] = t.text;
      j["in_reply_to"] = t.in_reply_to ? json(*t.in_reply_to) : json(nullptr);
      j["thread_id"] = t.thread_id;
      j["retweet_count"] = t.retweet_count;
      j["label"] = t.label ? json(to_string(*t.label)) : json(nullptr);
      if (!thread.event().empty()) j["event"] = thread.event();
      out << j.dump() << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

int depth_of(const ConversationThread& thread, const std::string& tweet_id) {
  const Tweet* t = &thread.tweet(tweet_id);
  int depth = 0;
  while (t->in_reply_to) {
    t = &thread.tweet(*t->in_reply_to);
    ++depth;
  }
  return depth;
}

std::map<StanceLabel, std::size_t> class_counts(const Dataset& dataset) {
  std::map<StanceLabel, std::size_t> counts;
  for (StanceLabel label : kAllLabels) counts[label] = 0;
  for (const auto& thread : dataset.threads) {
    for (const Tweet& t : thread.tweets()) {
      if (t.label) ++counts[*t.label];
    }
  }
  return counts;
}

Dataset balanced_subset(const Dataset& dataset, std::size_t per_class, std::uint64_t seed) {
  // Candidate ids per class, sorted so the draw depends only on content+seed.
  std::map<StanceLabel, std::vector<std::string>> candidates;
  for (const auto& thread : dataset.threads) {
    for (const Tweet& t : thread.tweets()) {
      if (t.label) candidates[*t.label].push_back(t.id);
    }
  }
  std::mt19937_64 rng(seed);
  std::set<std::string> chosen;
  for (StanceLabel label : kAllLabels) {
    auto& ids = candidates[label];
    if (ids.size() < per_class) {
      throw std::runtime_error("class '" + to_string(label) + "' has only " +
                               std::to_string(ids.size()) + " labeled instances, need " +
                               std::to_string(per_class));
    }
    std::sort(ids.begin(), ids.end());
    // Fisher-Yates prefix draw.
    for (std::size_t i = 0; i < per_class; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
      std::swap(ids[i], ids[pick(rng)]);
      chosen.insert(ids[i]);
    }
  }

  // Threads stay whole for feature context; unsampled tweets only lose
  // their label so they stop being instances.
  Dataset subset;
  subset.split = dataset.split;
  for (const auto& thread : dataset.threads) {
    std::vector<Tweet> tweets = thread.tweets();
    for (Tweet& t : tweets) {
      if (t.label && !chosen.count(t.id)) t.label.reset();
    }
    subset.threads.push_back(ConversationThread::build(thread.event(), std::move(tweets)));
  }
  return subset;
}

}  // namespace stance
