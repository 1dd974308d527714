// Acceptance suite: runs every criterion at its stated tolerance and prints
// one [PASS]/[FAIL]/[SKIP] line per criterion. Exit status is nonzero when
// any criterion fails. Criterion 6 needs the official dataset (and gated
// lexicons); it is reported as skipped when those are not configured.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/eval.hpp"
#include "stance/features.hpp"
#include "stance/svm.hpp"
#include "support/jacobi.hpp"
#include "support/qp_oracle.hpp"

using namespace stance;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void pass(int num, const std::string& what, const std::string& detail = "") {
  std::cout << "[PASS] criterion " << num << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << "\n";
}

void fail(int num, const std::string& what, const std::string& detail) {
  ++g_failures;
  std::cout << "[FAIL] criterion " << num << ": " << what << " (" << detail << ")\n";
}

void skip(int num, const std::string& what, const std::string& why) {
  std::cout << "[SKIP] criterion " << num << ": " << what << " (" << why << ")\n";
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

bool rounds_to(double v, double target, int decimals) {
  double scale = std::pow(10.0, decimals);
  return std::llround(v * scale) == std::llround(target * scale);
}

// ---------------------------------------------------------------- criterion 1

void criterion1() {
  const std::string what = "metric arithmetic on the reference confusion matrix";
  ConfusionMatrix cm;
  cm.counts = {{{27, 0, 3, 64}, {2, 0, 1, 68}, {0, 0, 50, 56}, {13, 0, 8, 757}}};
  EvalReport r = metrics(cm);
  const ClassMetrics& comment = r.per_class[static_cast<int>(StanceLabel::Comment)];
  std::string detail = "accuracy " + fmt(r.accuracy) + ", comment P/R/F1 " +
                       fmt(comment.precision, 3) + "/" + fmt(comment.recall, 3) + "/" +
                       fmt(comment.f1, 3) + ", macro recall " + fmt(r.macro.recall, 3);
  if (r.accuracy != 834.0 / 1049.0) {
    fail(1, what, "accuracy is not exactly 834/1049: " + detail);
    return;
  }
  if (std::fabs(comment.precision - 0.801) > 5e-4 || std::fabs(comment.recall - 0.973) > 5e-4 ||
      std::fabs(comment.f1 - 0.879) > 5e-4) {
    fail(1, what, "comment P/R/F1 off: " + detail);
    return;
  }
  if (!rounds_to(comment.precision, 0.80, 2) || !rounds_to(comment.recall, 0.97, 2) ||
      !rounds_to(comment.f1, 0.88, 2)) {
    fail(1, what, "comment metrics do not round to 0.80/0.97/0.88: " + detail);
    return;
  }
  if (std::fabs(r.macro.recall - 0.433) > 5e-4) {
    fail(1, what, "macro recall off: " + detail);
    return;
  }
  pass(1, what, detail);
}

// ---------------------------------------------------------------- criterion 2

void criterion2() {
  const std::string what = "metric arithmetic on the balanced confusion matrix";
  ConfusionMatrix cm;
  cm.counts = {{{39, 14, 5, 13}, {8, 28, 5, 30}, {2, 3, 62, 4}, {14, 14, 2, 41}}};
  EvalReport r = metrics(cm);
  std::string detail = "accuracy " + fmt(r.accuracy);
  if (r.accuracy != 170.0 / 284.0) {
    fail(2, what, "accuracy is not exactly 170/284: " + detail);
    return;
  }
  if (!rounds_to(r.accuracy, 0.599, 3)) {
    fail(2, what, "accuracy does not round to 59.9%: " + detail);
    return;
  }
  pass(2, what, detail);
}

// ---------------------------------------------------------------- criterion 3

double dual_objective(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      const KernelSpec& spec, const std::vector<double>& alpha) {
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lin += alpha[i];
    for (std::size_t j = 0; j < x.size(); ++j) {
      quad += alpha[i] * alpha[j] * y[i] * y[j] * qp_oracle::kernel_ref(spec, x[i], x[j]);
    }
  }
  return lin - 0.5 * quad;
}

void criterion3() {
  const std::string what = "SMO vs brute-force QP oracle on randomized fixtures";
  std::mt19937 rng(424242);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::array<KernelKind, 4> kinds = {KernelKind::Linear, KernelKind::Rbf,
                                           KernelKind::Polynomial, KernelKind::Sigmoid};
  const std::array<double, 3> cs = {0.1, 1.0, 10.0};

  int fixtures = 0;
  double worst_gap = 0.0;
  for (KernelKind kind : kinds) {
    for (double c : cs) {
      for (bool weighted : {false, true}) {
        ++fixtures;
        std::size_t n = 6 + rng() % 7;  // 6..12
        std::size_t dim = 2 + rng() % 4;
        std::vector<std::vector<double>> x(n, std::vector<double>(dim));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
          for (auto& v : x[i]) v = gauss(rng);
          y[i] = i % 2 == 0 ? 1 : -1;
        }
        double pos_w = weighted ? 1.5 : 1.0;
        double neg_w = weighted ? 0.75 : 1.0;

        TrainParams params;
        params.C = c;
        params.kernel.kind = kind;
        params.kernel.gamma = 1.0 / static_cast<double>(dim);
        params.kernel.degree = 2;
        params.kernel.coef0 = kind == KernelKind::Sigmoid ? 0.0 : 1.0;
        params.tolerance = 1e-6;
        SmoTrace trace;
        BinaryModel model = train_binary(x, y, params, pos_w, neg_w, &trace);

        std::vector<double> box(n);
        for (std::size_t i = 0; i < n; ++i) box[i] = c * (y[i] == 1 ? pos_w : neg_w);
        qp_oracle::Problem problem{x, y, box, params.kernel.resolved(dim)};
        qp_oracle::Solution oracle = qp_oracle::solve(problem, &trace.alphas);

        double smo_obj = dual_objective(x, y, problem.kernel, trace.alphas);
        double gap = std::fabs(smo_obj - oracle.objective);
        worst_gap = std::max(worst_gap, gap);
        if (gap >= 1e-4) {
          fail(3, what,
               "fixture " + std::to_string(fixtures) + " (" + to_string(kind) + ", C=" + fmt(c, 1) +
                   (weighted ? ", weighted" : "") + "): objective gap " + fmt(gap, 8));
          return;
        }

        // prediction agreement on training points plus random probes
        std::vector<std::vector<double>> probes = x;
        for (int k = 0; k < 20; ++k) {
          std::vector<double> p(dim);
          for (auto& v : p) v = gauss(rng);
          probes.push_back(p);
        }
        for (const auto& p : probes) {
          double f_oracle = qp_oracle::decision(problem, oracle, p);
          if (std::fabs(f_oracle) < 1e-6) continue;  // numerically on the boundary
          double f_smo = decision_value(model, p);
          if ((f_smo >= 0) != (f_oracle >= 0)) {
            fail(3, what,
                 "fixture " + std::to_string(fixtures) + " (" + to_string(kind) +
                     "): prediction disagreement, f_smo=" + fmt(f_smo, 6) +
                     " f_oracle=" + fmt(f_oracle, 6));
            return;
          }
        }
      }
    }
  }
  pass(3, what,
       std::to_string(fixtures) + " fixtures, worst objective gap " + fmt(worst_gap, 8));
}

// ---------------------------------------------------------------- criterion 4

void criterion4() {
  const std::string what = "kernel Gram matrices: symmetry, PSD within 1e-8, rbf diagonal 1";
  std::mt19937 rng(99);
  std::normal_distribution<double> gauss(0.0, 2.0);
  double min_eigen_seen = 1e9;
  for (int round = 0; round < 50; ++round) {
    std::size_t n = 2 + rng() % 9;    // <= 10
    std::size_t dim = 1 + rng() % 17;  // <= 17
    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    for (auto& row : x) {
      for (auto& v : row) v = gauss(rng);
    }
    for (KernelKind kind : {KernelKind::Rbf, KernelKind::Linear}) {
      KernelSpec spec;
      spec.kind = kind;
      spec.gamma = 1.0 / static_cast<double>(dim);
      std::vector<std::vector<double>> gram(n, std::vector<double>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) gram[i][j] = kernel_eval(spec, x[i], x[j]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        if (kind == KernelKind::Rbf && gram[i][i] != 1.0) {
          fail(4, what, "rbf diagonal is " + fmt(gram[i][i], 12));
          return;
        }
        for (std::size_t j = 0; j < n; ++j) {
          if (std::fabs(gram[i][j] - gram[j][i]) > 1e-12) {
            fail(4, what, "asymmetry " + fmt(std::fabs(gram[i][j] - gram[j][i]), 15));
            return;
          }
        }
      }
      auto eigen = testsupport::symmetric_eigenvalues(gram);
      for (double ev : eigen) {
        min_eigen_seen = std::min(min_eigen_seen, ev);
        if (ev < -1e-8) {
          fail(4, what, "negative eigenvalue " + fmt(ev, 12) + " for " + to_string(kind));
          return;
        }
      }
    }
  }
  pass(4, what, "50 sets x 2 kernels, min eigenvalue " + fmt(min_eigen_seen, 10));
}

// ---------------------------------------------------------------- criterion 5

void criterion5() {
  const std::string what = "feature dimensions and extraction determinism";
  Dataset train = load_flat(fs::path(STANCE_DATA_FIXTURE_DIR) / "demo_train.jsonl");
  LexiconRegistry registry =
      LexiconRegistry::load_dir(fs::path(STANCE_DATA_FIXTURE_DIR) / "lexicons");
  Instances inst = labeled_instances(train);
  const std::vector<std::pair<std::string, std::size_t>> expected = {
      {"A", 6},  {"B", 3},  {"C", 24}, {"D", 11}, {"E", 9},  {"F", 30},
      {"G", 17}, {"H", 33}, {"I", 20}, {"J", 41}, {"K", 44}, {"BEST17", 17}};
  for (const auto& [name, dim] : expected) {
    FeatureConfig config = FeatureConfig::by_name(name);
    auto a = extract_all(inst, registry, config, 4);
    auto b = extract_all(inst, registry, config, 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i].values.size() != dim) {
        fail(5, what,
             "config " + name + " produced dimension " + std::to_string(a[i].values.size()) +
                 ", expected " + std::to_string(dim));
        return;
      }
      if (a[i].values != b[i].values) {
        fail(5, what, "config " + name + " is not deterministic across runs");
        return;
      }
    }
  }
  pass(5, what, "12 configs over " + std::to_string(inst.size()) + " instances");
}

// ---------------------------------------------------------------- criterion 6

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

void criterion6() {
  const std::string what = "conditional reproduction on the official dataset";
  std::string train_root = env_or_empty("STANCE_SEMEVAL_TRAIN_ROOT");
  std::string train_key = env_or_empty("STANCE_SEMEVAL_TRAIN_KEY");
  std::string test_root = env_or_empty("STANCE_SEMEVAL_TEST_ROOT");
  std::string test_key = env_or_empty("STANCE_SEMEVAL_TEST_KEY");
  std::string lexicon_dir = env_or_empty("STANCE_LEXICONS");
  if (train_root.empty() || train_key.empty() || test_root.empty() || test_key.empty()) {
    skip(6, what,
         "official dataset not configured; set STANCE_SEMEVAL_TRAIN_ROOT, "
         "STANCE_SEMEVAL_TRAIN_KEY, STANCE_SEMEVAL_TEST_ROOT, STANCE_SEMEVAL_TEST_KEY "
         "and optionally STANCE_LEXICONS");
    return;
  }
  try {
    Dataset train = load_semeval(train_root, train_key, Split::Train);
    Dataset test = load_semeval(test_root, test_key, Split::Test);
    auto train_counts = class_counts(train);
    auto test_counts = class_counts(test);
    if (train_counts[StanceLabel::Support] != 841 || train_counts[StanceLabel::Deny] != 333 ||
        train_counts[StanceLabel::Query] != 330 || train_counts[StanceLabel::Comment] != 2734 ||
        test_counts[StanceLabel::Support] != 94 || test_counts[StanceLabel::Deny] != 71 ||
        test_counts[StanceLabel::Query] != 106 || test_counts[StanceLabel::Comment] != 778) {
      fail(6, what, "class counts do not match the official distribution");
      return;
    }

    TrainParams params;  // C=1, rbf, auto gamma, no weighting
    std::vector<std::string> notes;

    // structural-only row A needs no lexicons
    EvalReport row_a = evaluate_config(train, test, LexiconRegistry::empty(),
                                       FeatureConfig::by_name("A"), params, 0);
    notes.push_back("row A accuracy " + fmt(row_a.accuracy));
    if (std::fabs(row_a.accuracy - 0.731) > 0.02) {
      fail(6, what, notes.back() + " outside 0.731 +/- 0.02");
      return;
    }

    if (lexicon_dir.empty()) {
      pass(6, what,
           notes[0] + "; lexicon-dependent checks skipped (STANCE_LEXICONS not set)");
      return;
    }
    LexiconRegistry registry = LexiconRegistry::load_dir(lexicon_dir);
    FeatureConfig best = FeatureConfig::by_name("BEST17");
    auto problems = validate_registry(registry, best);
    if (!problems.empty()) {
      std::string joined;
      for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
      pass(6, what, notes[0] + "; lexicon-dependent checks skipped (" + joined + ")");
      return;
    }

    EvalReport best_run = evaluate_config(train, test, registry, best, params, 0);
    notes.push_back("best-config accuracy " + fmt(best_run.accuracy));
    if (std::fabs(best_run.accuracy - 0.795) > 0.015) {
      fail(6, what, notes.back() + " outside 0.795 +/- 0.015");
      return;
    }

    double deny_recall = best_run.per_class[static_cast<int>(StanceLabel::Deny)].recall;
    long deny_total = best_run.matrix.row_sum(static_cast<int>(StanceLabel::Deny));
    long deny_as_comment = best_run.matrix.at(StanceLabel::Deny, StanceLabel::Comment);
    notes.push_back("deny recall " + fmt(deny_recall) + ", deny->comment " +
                    std::to_string(deny_as_comment) + "/" + std::to_string(deny_total));
    if (deny_recall != 0.0 ||
        static_cast<double>(deny_as_comment) < 0.8 * static_cast<double>(deny_total)) {
      fail(6, what, notes.back() + " does not reproduce the deny->comment pattern");
      return;
    }

    EvalReport balanced =
        run_balanced(train, test, registry, best, params, 330, 71, 42, 0);
    notes.push_back("balanced accuracy " + fmt(balanced.accuracy));
    if (std::fabs(balanced.accuracy - 0.599) > 0.03) {
      fail(6, what, notes.back() + " outside 0.599 +/- 0.03");
      return;
    }

    std::string joined;
    for (const auto& n : notes) joined += (joined.empty() ? "" : "; ") + n;
    pass(6, what, joined);
  } catch (const std::exception& e) {
    fail(6, what, e.what());
  }
}

// ---------------------------------------------------------------- criterion 7

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion7() {
  const std::string what = "training determinism and model round-trip";
  Dataset train = load_flat(fs::path(STANCE_DATA_FIXTURE_DIR) / "demo_train.jsonl");
  LexiconRegistry registry =
      LexiconRegistry::load_dir(fs::path(STANCE_DATA_FIXTURE_DIR) / "lexicons");
  FeatureConfig config = FeatureConfig::by_name("BEST17");
  Instances inst = labeled_instances(train);
  TrainParams params;  // defaults

  fs::path dir = fs::temp_directory_path() / "stance_acceptance";
  fs::create_directories(dir);

  auto train_once = [&](const fs::path& out, int workers) {
    auto matrix = extract_all(inst, registry, config, workers);
    StanceModel model = train_multiclass(matrix, inst.labels, params, config.name, workers);
    save_model(model, out);
    return model;
  };
  StanceModel model = train_once(dir / "m1.json", 4);
  train_once(dir / "m2.json", 1);
  if (slurp(dir / "m1.json") != slurp(dir / "m2.json")) {
    fail(7, what, "two identical training runs produced different model files");
    return;
  }

  StanceModel loaded = load_model(dir / "m1.json");
  std::mt19937 rng(2718);
  std::normal_distribution<double> gauss(0.0, 3.0);
  auto schema = std::make_shared<const std::vector<std::string>>(model.schema);
  for (int i = 0; i < 100; ++i) {
    FeatureVector x;
    x.schema = schema;
    x.values.resize(model.schema.size());
    for (auto& v : x.values) v = gauss(rng);
    if (predict(model, x) != predict(loaded, x)) {
      fail(7, what, "round-trip model disagrees with the original on input " + std::to_string(i));
      return;
    }
  }
  pass(7, what, "byte-identical model files; 100/100 round-trip predictions agree");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (g_failures > 0) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all runnable criteria passed\n";
  return 0;
}
