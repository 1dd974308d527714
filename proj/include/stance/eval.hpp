#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/features.hpp"
#include "stance/svm.hpp"

namespace stance {

/// 4x4 counts, rows = gold, columns = predicted, label order S,D,Q,C.
struct ConfusionMatrix {
  std::array<std::array<long, kNumLabels>, kNumLabels> counts{};

  long total() const;
  long trace() const;
  long row_sum(std::size_t gold) const;
  long col_sum(std::size_t pred) const;
  long& at(StanceLabel gold, StanceLabel pred);
  long at(StanceLabel gold, StanceLabel pred) const;
};

ConfusionMatrix confusion(const std::vector<StanceLabel>& gold,
                          const std::vector<StanceLabel>& pred);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::string config_name;
  double accuracy = 0.0;
  std::array<ClassMetrics, kNumLabels> per_class{};
  ClassMetrics macro;  // unweighted means over the four classes
  ConfusionMatrix matrix;
  // params snapshot for report files
  double C = 1.0;
  KernelSpec kernel;
  bool balanced_weights = false;
  std::optional<std::uint64_t> seed;
};

/// precision/recall use the 0-when-denominator-0 convention (a never-
/// predicted class scores 0, matching the deny row of the reference runs).
EvalReport metrics(const ConfusionMatrix& cm);

/// Trains and evaluates one configuration end to end.
EvalReport evaluate_config(const Dataset& train, const Dataset& test,
                           const LexiconRegistry& registry, const FeatureConfig& config,
                           const TrainParams& params, int workers = 1);

struct AblationRow {
  std::string config_name;
  bool skipped = false;
  std::string skip_reason;
  EvalReport report;
};

/// One row per ablation set A..K, all with the same classifier params.
/// Rows whose lexicon resources are missing are skipped with a notice.
std::vector<AblationRow> run_ablation(const Dataset& train, const Dataset& test,
                                      const LexiconRegistry& registry, const TrainParams& params,
                                      int workers = 1);

enum class GridCriterion { Accuracy, MacroF1 };

struct GridCell {
  double C = 1.0;
  KernelKind kernel = KernelKind::Rbf;
  bool balanced = false;
  bool failed = false;
  std::string error;
  double dev_accuracy = 0.0;
  double dev_macro_f1 = 0.0;
};

struct GridResult {
  std::vector<GridCell> cells;  // enumeration order: C x kernel x weighting
  std::size_t best_index = 0;
  TrainParams best_params;
};

/// 7 C values x 4 kernels x {none, balanced} = 56 candidates scored on the
/// dev split; ties keep the first cell in enumeration order. A failing cell
/// is marked and the search continues.
GridResult grid_search(const Dataset& train, const Dataset& dev, const LexiconRegistry& registry,
                       const FeatureConfig& config, const KernelSpec& kernel_base,
                       GridCriterion criterion = GridCriterion::Accuracy, int workers = 1);

/// The balanced-data experiment: per-class subsets of train and test,
/// trained with the given config/params.
EvalReport run_balanced(const Dataset& train, const Dataset& test, const LexiconRegistry& registry,
                        const FeatureConfig& config, const TrainParams& params,
                        std::size_t per_class_train, std::size_t per_class_test,
                        std::uint64_t seed, int workers = 1);

}  // namespace stance
