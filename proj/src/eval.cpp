#include "stance/eval.hpp"

#include <stdexcept>

#include "stance/util.hpp"

namespace stance {

long ConfusionMatrix::total() const {
  long n = 0;
  for (const auto& row : counts) {
    for (long v : row) n += v;
  }
  return n;
}

long ConfusionMatrix::trace() const {
  long n = 0;
  for (std::size_t i = 0; i < kNumLabels; ++i) n += counts[i][i];
  return n;
}

long ConfusionMatrix::row_sum(std::size_t gold) const {
  long n = 0;
  for (long v : counts[gold]) n += v;
  return n;
}

long ConfusionMatrix::col_sum(std::size_t pred) const {
  long n = 0;
  for (const auto& row : counts) n += row[pred];
  return n;
}

long& ConfusionMatrix::at(StanceLabel gold, StanceLabel pred) {
  return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(pred)];
}

long ConfusionMatrix::at(StanceLabel gold, StanceLabel pred) const {
  return counts[static_cast<std::size_t>(gold)][static_cast<std::size_t>(pred)];
}

ConfusionMatrix confusion(const std::vector<StanceLabel>& gold,
                          const std::vector<StanceLabel>& pred) {
  if (gold.empty()) throw std::runtime_error("confusion: empty label lists");
  if (gold.size() != pred.size()) {
    throw std::runtime_error("confusion: gold and prediction lengths differ (" +
                             std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) +
                             ")");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) ++cm.at(gold[i], pred[i]);
  return cm;
}

EvalReport metrics(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total <= 0) throw std::runtime_error("metrics: empty confusion matrix");

  EvalReport report;
  report.matrix = cm;
  report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  double psum = 0.0, rsum = 0.0, fsum = 0.0;
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const double tp = static_cast<double>(cm.counts[c][c]);
    const long col = cm.col_sum(c);
    const long row = cm.row_sum(c);
    ClassMetrics m;
    m.precision = col == 0 ? 0.0 : tp / static_cast<double>(col);
    m.recall = row == 0 ? 0.0 : tp / static_cast<double>(row);
    m.f1 = (m.precision + m.recall) == 0.0
               ? 0.0
               : 2.0 * m.precision * m.recall / (m.precision + m.recall);
    report.per_class[c] = m;
    psum += m.precision;
    rsum += m.recall;
    fsum += m.f1;
  }
  report.macro.precision = psum / kNumLabels;
  report.macro.recall = rsum / kNumLabels;
  report.macro.f1 = fsum / kNumLabels;
  return report;
}

EvalReport evaluate_config(const Dataset& train, const Dataset& test,
                           const LexiconRegistry& registry, const FeatureConfig& config,
                           const TrainParams& params, int workers) {
  Instances train_inst = labeled_instances(train);
  Instances test_inst = labeled_instances(test);
  if (train_inst.size() == 0) throw std::runtime_error("evaluate_config: no labeled training data");
  if (test_inst.size() == 0) throw std::runtime_error("evaluate_config: no labeled test data");

  auto train_x = extract_all(train_inst, registry, config, workers);
  StanceModel model = train_multiclass(train_x, train_inst.labels, params, config.name, workers);

  auto test_x = extract_all(test_inst, registry, config, workers);
  std::vector<StanceLabel> predictions(test_x.size(), StanceLabel::Comment);
  parallel_for(test_x.size(), workers,
               [&](std::size_t i) { predictions[i] = predict(model, test_x[i]); });

  EvalReport report = metrics(confusion(test_inst.labels, predictions));
  report.config_name = config.name;
  report.C = params.C;
  report.kernel = params.kernel.resolved(config.dimension());
  report.balanced_weights = params.class_weights.has_value();
  return report;
}

std::vector<AblationRow> run_ablation(const Dataset& train, const Dataset& test,
                                      const LexiconRegistry& registry, const TrainParams& params,
                                      int workers) {
  std::vector<AblationRow> rows;
  for (const std::string& name : FeatureConfig::ablation_names()) {
    FeatureConfig config = FeatureConfig::by_name(name);
    AblationRow row;
    row.config_name = name;
    auto problems = validate_registry(registry, config);
    if (!problems.empty()) {
      row.skipped = true;
      std::string reason;
      for (const auto& p : problems) {
        if (!reason.empty()) reason += "; ";
        reason += p;
      }
      row.skip_reason = reason;
      warn("ablation row " + name + " skipped: " + reason);
    } else {
      row.report = evaluate_config(train, test, registry, config, params, workers);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

GridResult grid_search(const Dataset& train, const Dataset& dev, const LexiconRegistry& registry,
                       const FeatureConfig& config, const KernelSpec& kernel_base,
                       GridCriterion criterion, int workers) {
  Instances train_inst = labeled_instances(train);
  Instances dev_inst = labeled_instances(dev);
  if (train_inst.size() == 0) throw std::runtime_error("grid_search: no labeled training data");
  if (dev_inst.size() == 0) throw std::runtime_error("grid_search: dev split is empty");

  auto problems = validate_registry(registry, config);
  if (!problems.empty()) {
    std::string reason;
    for (const auto& p : problems) {
      if (!reason.empty()) reason += "; ";
      reason += p;
    }
    throw std::runtime_error("grid_search: config " + config.name + " is not runnable: " + reason);
  }

  // Feature extraction is shared by all cells.
  auto train_x = extract_all(train_inst, registry, config, workers);
  auto dev_x = extract_all(dev_inst, registry, config, workers);

  static const std::array<double, 7> kCValues = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
  static const std::array<KernelKind, 4> kKernels = {KernelKind::Linear, KernelKind::Rbf,
                                                     KernelKind::Polynomial, KernelKind::Sigmoid};

  GridResult result;
  for (double c : kCValues) {
    for (KernelKind kind : kKernels) {
      for (bool balanced : {false, true}) {
        GridCell cell;
        cell.C = c;
        cell.kernel = kind;
        cell.balanced = balanced;
        result.cells.push_back(cell);
      }
    }
  }

  std::vector<EvalReport> reports(result.cells.size());
  parallel_for(result.cells.size(), workers, [&](std::size_t i) {
    GridCell& cell = result.cells[i];
    try {
      TrainParams params;
      params.C = cell.C;
      params.kernel = kernel_base;
      params.kernel.kind = cell.kernel;
      if (cell.balanced) params.class_weights = balanced_weights(train_inst.labels);
      StanceModel model = train_multiclass(train_x, train_inst.labels, params, config.name, 1);
      std::vector<StanceLabel> predictions(dev_x.size(), StanceLabel::Comment);
      for (std::size_t k = 0; k < dev_x.size(); ++k) predictions[k] = predict(model, dev_x[k]);
      EvalReport report = metrics(confusion(dev_inst.labels, predictions));
      cell.dev_accuracy = report.accuracy;
      cell.dev_macro_f1 = report.macro.f1;
      reports[i] = std::move(report);
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
    }
  });

  std::size_t best = result.cells.size();
  for (std::size_t i = 0; i < result.cells.size(); ++i) {
    const GridCell& cell = result.cells[i];
    if (cell.failed) continue;
    double score = criterion == GridCriterion::Accuracy ? cell.dev_accuracy : cell.dev_macro_f1;
    double best_score = best == result.cells.size()
                            ? -1.0
                            : (criterion == GridCriterion::Accuracy ? result.cells[best].dev_accuracy
                                                                    : result.cells[best].dev_macro_f1);
    if (score > best_score) best = i;  // strict: first cell wins ties
  }
  if (best == result.cells.size()) {
    throw std::runtime_error("grid_search: every cell failed");
  }
  result.best_index = best;
  result.best_params.C = result.cells[best].C;
  result.best_params.kernel = kernel_base;
  result.best_params.kernel.kind = result.cells[best].kernel;
  if (result.cells[best].balanced) {
    result.best_params.class_weights = balanced_weights(train_inst.labels);
  }
  return result;
}

EvalReport run_balanced(const Dataset& train, const Dataset& test, const LexiconRegistry& registry,
                        const FeatureConfig& config, const TrainParams& params,
                        std::size_t per_class_train, std::size_t per_class_test,
                        std::uint64_t seed, int workers) {
  Dataset balanced_train = balanced_subset(train, per_class_train, seed);
  Dataset balanced_test = balanced_subset(test, per_class_test, seed + 1);
  EvalReport report =
      evaluate_config(balanced_train, balanced_test, registry, config, params, workers);
  report.seed = seed;
  return report;
}

}  // namespace stance
