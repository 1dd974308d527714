// Command-line pipeline: ingest/train/predict/eval/ablate/grid/balance over
// rumour conversation threads.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "stance/corpus.hpp"
#include "stance/eval.hpp"
#include "stance/features.hpp"
#include "stance/report_io.hpp"
#include "stance/svm.hpp"
#include "stance/util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stance;

namespace {

struct DataArg {
  std::string path;
  std::string key;
};

Dataset load_input(const DataArg& arg, Split split) {
  if (fs::is_directory(arg.path)) {
    if (arg.key.empty()) {
      throw std::runtime_error("directory input '" + arg.path +
                               "' needs a label key file (--*-key)");
    }
    return load_semeval(arg.path, arg.key, split);
  }
  if (!arg.key.empty()) {
    throw std::runtime_error("label key files only apply to directory (SemEval layout) input");
  }
  return load_flat(arg.path, split);
}

LexiconRegistry load_registry(const std::string& lexicon_dir) {
  std::string dir = lexicon_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("STANCE_LEXICONS")) dir = env;
  }
  if (dir.empty()) {
    warn(
        "no lexicon directory given (--lexicons or STANCE_LEXICONS); lexicon-backed features "
        "will be zero. Fully runnable configs without lexicons: A, B, E");
    return LexiconRegistry::empty();
  }
  return LexiconRegistry::load_dir(dir);
}

TrainParams make_params(double c, const std::string& kernel, double gamma, int degree,
                        double coef0, const std::string& weighting, double tolerance,
                        int max_passes, const std::vector<StanceLabel>& train_labels) {
  TrainParams params;
  params.C = c;
  params.kernel.kind = parse_kernel(kernel);
  params.kernel.gamma = gamma;
  params.kernel.degree = degree;
  params.kernel.coef0 = coef0;
  params.tolerance = tolerance;
  params.max_passes = max_passes;
  std::string w = lowercase_ascii(weighting);
  if (w == "balanced") {
    params.class_weights = balanced_weights(train_labels);
  } else if (w != "none") {
    throw std::runtime_error("--weights must be 'none' or 'balanced'");
  }
  return params;
}

/// Wall-clock goes to the console only; the JSON reports stay byte-stable
/// across identical runs.
class RuntimeClock {
 public:
  ~RuntimeClock() {
    auto elapsed = std::chrono::steady_clock::now() - start_;
    double seconds = std::chrono::duration<double>(elapsed).count();
    std::cout << "runtime: " << std::fixed << std::setprecision(2) << seconds << "s\n";
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void write_schema_dump(const std::vector<std::string>& schema, const fs::path& model_path) {
  fs::path schema_path = model_path;
  schema_path += ".schema.json";
  write_json_file(json{{"schema", schema}}, schema_path);
}

int run(int argc, char** argv) {
  CLI::App app{"Rumour stance classification pipeline (SDQC)"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  std::string lexicon_dir;
  int workers = 0;
  std::uint64_t seed = 42;
  app.add_option("--lexicons", lexicon_dir, "Lexicon directory (or env STANCE_LEXICONS)");
  app.add_option("--workers", workers, "Worker threads (0 = all cores)");
  app.add_option("--seed", seed, "Random seed")->capture_default_str();

  // shared per-subcommand option storage
  DataArg train_arg, test_arg, dev_arg, data_arg;
  std::string out_path, model_path, pred_path, split_name = "train";
  std::string config_name = "BEST17";
  std::string kernel_name = "rbf";
  std::string weighting = "none";
  std::string criterion_name = "accuracy";
  double c_value = 1.0, gamma = 0.0, coef0 = 0.0, tolerance = 1e-3;
  int degree = 3, max_passes = 10;
  bool merge_dev = false, text_only = false;
  std::size_t per_class_train = 330, per_class_test = 71;

  auto add_data_opts = [&](CLI::App* cmd, DataArg& arg, const std::string& name, bool required) {
    auto* opt = cmd->add_option("--" + name, arg.path,
                                name + " data: flat JSONL file or SemEval directory");
    if (required) opt->required();
    cmd->add_option("--" + name + "-key", arg.key, "label key JSON for --" + name);
  };
  auto add_svm_opts = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_name, "Feature config (A..K or BEST17)")
        ->capture_default_str();
    cmd->add_option("--kernel", kernel_name, "linear|rbf|polynomial|sigmoid")
        ->capture_default_str();
    cmd->add_option("--C", c_value, "Penalty parameter")->capture_default_str();
    cmd->add_option("--gamma", gamma, "Kernel gamma; <=0 means auto (1/dim)")
        ->capture_default_str();
    cmd->add_option("--degree", degree, "Polynomial degree")->capture_default_str();
    cmd->add_option("--coef0", coef0, "Polynomial/sigmoid coef0")->capture_default_str();
    cmd->add_option("--weights", weighting, "Class weighting: none|balanced")
        ->capture_default_str();
    cmd->add_option("--tolerance", tolerance, "SMO KKT tolerance")->capture_default_str();
    cmd->add_option("--max-passes", max_passes, "SMO stall guard multiplier")
        ->capture_default_str();
  };

  auto* ingest = app.add_subcommand("ingest", "Convert a SemEval directory tree to flat JSONL");
  add_data_opts(ingest, data_arg, "data", true);
  ingest->add_option("--split", split_name, "dev|train|test")->capture_default_str();
  ingest->add_option("--out", out_path, "Output JSONL path")->required();

  auto* train_cmd = app.add_subcommand("train", "Train a stance model");
  add_data_opts(train_cmd, train_arg, "train", true);
  add_data_opts(train_cmd, dev_arg, "dev", false);
  train_cmd->add_flag("--merge-dev", merge_dev, "Merge --dev threads into training");
  add_svm_opts(train_cmd);
  train_cmd->add_option("--out", model_path, "Model output path")->required();

  auto* predict_cmd = app.add_subcommand("predict", "Predict labels for every tweet");
  predict_cmd->add_option("--model", model_path, "Model file")->required();
  add_data_opts(predict_cmd, data_arg, "data", true);
  predict_cmd->add_option("--out", out_path, "Predictions JSONL path")->required();

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model or a prediction file");
  eval_cmd->add_option("--model", model_path, "Model file");
  eval_cmd->add_option("--pred", pred_path, "Predictions JSONL (id -> label)");
  add_data_opts(eval_cmd, data_arg, "data", true);
  eval_cmd->add_option("--out", out_path, "Report JSON path");
  eval_cmd->add_flag("--text", text_only, "Print the table only, skip JSON output");

  auto* ablate_cmd = app.add_subcommand("ablate", "Run the A..K feature-set ablation");
  add_data_opts(ablate_cmd, train_arg, "train", true);
  add_data_opts(ablate_cmd, test_arg, "test", true);
  add_svm_opts(ablate_cmd);
  ablate_cmd->add_option("--out", out_path, "Ablation report JSON path");

  auto* grid_cmd = app.add_subcommand("grid", "Hyperparameter grid search on a dev split");
  add_data_opts(grid_cmd, train_arg, "train", true);
  add_data_opts(grid_cmd, dev_arg, "dev", true);
  add_svm_opts(grid_cmd);
  grid_cmd->add_option("--criterion", criterion_name, "accuracy|macro-f1")->capture_default_str();
  grid_cmd->add_option("--out", out_path, "Grid report JSON path");

  auto* balance_cmd = app.add_subcommand("balance", "Balanced-subset experiment");
  add_data_opts(balance_cmd, train_arg, "train", true);
  add_data_opts(balance_cmd, test_arg, "test", true);
  add_svm_opts(balance_cmd);
  balance_cmd->add_option("--per-class-train", per_class_train, "Training instances per class")
      ->capture_default_str();
  balance_cmd->add_option("--per-class-test", per_class_test, "Test instances per class")
      ->capture_default_str();
  balance_cmd->add_option("--out", out_path, "Report JSON path");

  CLI11_PARSE(app, argc, argv);

  if (ingest->parsed()) {
    Dataset dataset = load_input(data_arg, parse_split(split_name));
    write_flat(dataset, out_path);
    std::cout << "wrote " << dataset.tweet_count() << " tweets (" << dataset.labeled_count()
              << " labeled) to " << out_path << "\n";
    return 0;
  }

  if (train_cmd->parsed()) {
    Dataset train = load_input(train_arg, Split::Train);
    if (merge_dev) {
      if (dev_arg.path.empty()) throw std::runtime_error("--merge-dev needs --dev");
      Dataset dev = load_input(dev_arg, Split::Dev);
      for (auto& thread : dev.threads) train.threads.push_back(std::move(thread));
    }
    LexiconRegistry registry = load_registry(lexicon_dir);
    FeatureConfig config = FeatureConfig::by_name(config_name);
    for (const auto& problem : validate_registry(registry, config)) {
      warn("config " + config.name + ": " + problem);
    }
    Instances instances = labeled_instances(train);
    if (instances.size() == 0) throw std::runtime_error("no labeled training instances");
    TrainParams params = make_params(c_value, kernel_name, gamma, degree, coef0, weighting,
                                     tolerance, max_passes, instances.labels);
    auto matrix = extract_all(instances, registry, config, workers);
    StanceModel model = train_multiclass(matrix, instances.labels, params, config.name, workers);
    save_model(model, model_path);
    write_schema_dump(model.schema, model_path);
    std::cout << "trained " << config.name << " on " << instances.size() << " instances; model -> "
              << model_path << "\n";
    return 0;
  }

  if (predict_cmd->parsed()) {
    StanceModel model = load_model(model_path);
    Dataset data = load_input(data_arg, Split::Test);
    LexiconRegistry registry = load_registry(lexicon_dir);
    FeatureConfig config = FeatureConfig::by_name(model.config_name);
    for (const auto& problem : validate_registry(registry, config)) {
      warn("config " + config.name + ": " + problem);
    }
    // one prediction line per tweet, in dataset order
    std::vector<const Tweet*> tweets;
    std::vector<const ConversationThread*> threads;
    for (const auto& thread : data.threads) {
      for (const Tweet& t : thread.tweets()) {
        tweets.push_back(&t);
        threads.push_back(&thread);
      }
    }
    std::vector<PredictionDetail> details(tweets.size());
    parallel_for(tweets.size(), workers, [&](std::size_t i) {
      FeatureVector x = extract(*tweets[i], *threads[i], registry, config);
      details[i] = predict_detail(model, x);
    });
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    for (std::size_t i = 0; i < tweets.size(); ++i) {
      json votes = json::object(), scores = json::object();
      for (std::size_t l = 0; l < kNumLabels; ++l) {
        votes[to_string(kAllLabels[l])] = details[i].votes[l];
        scores[to_string(kAllLabels[l])] = details[i].score_sums[l];
      }
      json line = {{"id", tweets[i]->id},
                   {"label", to_string(details[i].label)},
                   {"decision_summary", {{"votes", votes}, {"scores", scores}}}};
      out << line.dump() << "\n";
    }
    std::cout << "wrote " << tweets.size() << " predictions to " << out_path << "\n";
    return 0;
  }

  if (eval_cmd->parsed()) {
    RuntimeClock clock;
    Dataset data = load_input(data_arg, Split::Test);
    Instances instances = labeled_instances(data);
    if (instances.size() == 0) throw std::runtime_error("no labeled instances to evaluate");
    std::vector<StanceLabel> predictions;
    EvalReport report;
    if (!pred_path.empty()) {
      std::ifstream in(pred_path);
      if (!in) throw std::runtime_error("cannot open predictions: " + pred_path);
      std::map<std::string, StanceLabel> by_id;
      std::string line;
      while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        json j = json::parse(line);
        by_id[j.at("id").get<std::string>()] = parse_label(j.at("label").get<std::string>());
      }
      for (const Tweet* t : instances.tweets) {
        auto it = by_id.find(t->id);
        if (it == by_id.end()) {
          throw std::runtime_error("no prediction for labeled tweet '" + t->id + "'");
        }
        predictions.push_back(it->second);
      }
      report = metrics(confusion(instances.labels, predictions));
      report.config_name = "predictions:" + pred_path;
    } else if (!model_path.empty()) {
      StanceModel model = load_model(model_path);
      LexiconRegistry registry = load_registry(lexicon_dir);
      FeatureConfig config = FeatureConfig::by_name(model.config_name);
      for (const auto& problem : validate_registry(registry, config)) {
        warn("config " + config.name + ": " + problem);
      }
      auto matrix = extract_all(instances, registry, config, workers);
      predictions.assign(matrix.size(), StanceLabel::Comment);
      parallel_for(matrix.size(), workers,
                   [&](std::size_t i) { predictions[i] = predict(model, matrix[i]); });
      report = metrics(confusion(instances.labels, predictions));
      report.config_name = model.config_name;
      report.C = model.C;
      report.kernel = model.models.front().kernel;
      report.balanced_weights = model.class_weights.has_value();
    } else {
      throw std::runtime_error("eval needs --model or --pred");
    }
    std::cout << report_to_text(report);
    if (!out_path.empty() && !text_only) write_json_file(report_to_json(report), out_path);
    return 0;
  }

  if (ablate_cmd->parsed()) {
    RuntimeClock clock;
    Dataset train = load_input(train_arg, Split::Train);
    Dataset test = load_input(test_arg, Split::Test);
    LexiconRegistry registry = load_registry(lexicon_dir);
    Instances instances = labeled_instances(train);
    if (instances.size() == 0) throw std::runtime_error("no labeled training instances");
    TrainParams params = make_params(c_value, kernel_name, gamma, degree, coef0, weighting,
                                     tolerance, max_passes, instances.labels);
    auto rows = run_ablation(train, test, registry, params, workers);
    std::cout << ablation_to_text(rows);
    if (!out_path.empty()) write_json_file(ablation_to_json(rows), out_path);
    return 0;
  }

  if (grid_cmd->parsed()) {
    RuntimeClock clock;
    Dataset train = load_input(train_arg, Split::Train);
    Dataset dev = load_input(dev_arg, Split::Dev);
    LexiconRegistry registry = load_registry(lexicon_dir);
    FeatureConfig config = FeatureConfig::by_name(config_name);
    KernelSpec base;
    base.gamma = gamma;
    base.degree = degree;
    base.coef0 = coef0;
    GridCriterion criterion;
    std::string crit = lowercase_ascii(criterion_name);
    if (crit == "accuracy") {
      criterion = GridCriterion::Accuracy;
    } else if (crit == "macro-f1" || crit == "macro_f1") {
      criterion = GridCriterion::MacroF1;
    } else {
      throw std::runtime_error("--criterion must be 'accuracy' or 'macro-f1'");
    }
    GridResult grid = grid_search(train, dev, registry, config, base, criterion, workers);
    std::cout << grid_to_text(grid);
    if (!out_path.empty()) write_json_file(grid_to_json(grid), out_path);
    return 0;
  }

  if (balance_cmd->parsed()) {
    RuntimeClock clock;
    Dataset train = load_input(train_arg, Split::Train);
    Dataset test = load_input(test_arg, Split::Test);
    LexiconRegistry registry = load_registry(lexicon_dir);
    FeatureConfig config = FeatureConfig::by_name(config_name);
    Instances instances = labeled_instances(train);
    if (instances.size() == 0) throw std::runtime_error("no labeled training instances");
    TrainParams params = make_params(c_value, kernel_name, gamma, degree, coef0, weighting,
                                     tolerance, max_passes, instances.labels);
    EvalReport report = run_balanced(train, test, registry, config, params, per_class_train,
                                     per_class_test, seed, workers);
    std::cout << report_to_text(report);
    if (!out_path.empty()) write_json_file(report_to_json(report), out_path);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
