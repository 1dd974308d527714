#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stance/corpus.hpp"
#include "stance/features.hpp"

namespace stance {

enum class KernelKind { Linear, Rbf, Polynomial, Sigmoid };

const std::string& to_string(KernelKind kind);
KernelKind parse_kernel(std::string_view text);

struct KernelSpec {
  KernelKind kind = KernelKind::Rbf;
  /// gamma <= 0 means "auto": resolved to 1/dimension at training time.
  double gamma = 0.0;
  int degree = 3;    // polynomial only
  double coef0 = 0.0;  // polynomial / sigmoid

  KernelSpec resolved(std::size_t dimension) const;
};

/// linear <x,y>; rbf exp(-g*|x-y|^2); polynomial (g*<x,y>+c0)^deg;
/// sigmoid tanh(g*<x,y>+c0). Dimension mismatch -> error.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

struct TrainParams {
  double C = 1.0;
  KernelSpec kernel;
  /// Per-class cost multipliers; unset means every class weighs 1.
  std::optional<std::map<StanceLabel, double>> class_weights;
  /// SMO stopping tolerance on KKT violations.
  double tolerance = 1e-3;
  /// Stall guard: stop with a warning after max_passes * n successful
  /// updates that fail to improve the dual objective.
  int max_passes = 10;
};

/// weight(c) = N / (k * count(c)) over the labeled training distribution.
std::map<StanceLabel, double> balanced_weights(const std::vector<StanceLabel>& labels);

/// Soft-margin binary classifier in dual form. Only support vectors
/// (alpha > 0) are stored; dual_coef[i] = alpha_i * y_i.
struct BinaryModel {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> dual_coef;
  double bias = 0.0;
  KernelSpec kernel;  // gamma resolved
  StanceLabel positive = StanceLabel::Support;
  StanceLabel negative = StanceLabel::Comment;
};

/// Optional instrumentation for tests: the dual objective after every
/// accepted SMO update, the full alpha vector, and solver counters.
struct SmoTrace {
  std::vector<double> objective;
  std::vector<double> alphas;
  double bias = 0.0;
  long updates = 0;
  int sweeps = 0;
  bool hit_stall_cap = false;
};

/// Trains the binary soft-margin SVM via SMO. y holds +1/-1; the box for
/// sample i is [0, C * (y_i > 0 ? pos_weight : neg_weight)].
/// Single-class input or non-finite features -> error.
BinaryModel train_binary(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                         const TrainParams& params, double pos_weight = 1.0,
                         double neg_weight = 1.0, SmoTrace* trace = nullptr);

/// sum_i dual_coef_i * K(sv_i, x) + bias.
double decision_value(const BinaryModel& model, std::span<const double> x);

/// One-vs-one ensemble over the four stance labels plus the scaler and
/// feature schema it was trained with.
struct StanceModel {
  std::vector<BinaryModel> models;  // pair order (S,D),(S,Q),(S,C),(D,Q),(D,C),(Q,C)
  Scaler scaler;
  std::string config_name;
  std::vector<std::string> schema;
  double C = 1.0;
  double tolerance = 1e-3;
  std::optional<std::map<StanceLabel, double>> class_weights;
};

/// Fits the scaler on X, then trains k(k-1)/2 binary models on the scaled
/// matrix (all four labels must be present; the pairs may train
/// concurrently when workers > 1).
StanceModel train_multiclass(const std::vector<FeatureVector>& X,
                             const std::vector<StanceLabel>& labels, const TrainParams& params,
                             const std::string& config_name, int workers = 1);

struct PredictionDetail {
  StanceLabel label = StanceLabel::Comment;
  std::array<int, kNumLabels> votes{};
  std::array<double, kNumLabels> score_sums{};  // signed decision-value totals
};

/// Applies the stored scaler, runs every pairwise model and majority-votes;
/// ties fall to the tied label with the largest signed decision-value sum.
PredictionDetail predict_detail(const StanceModel& model, const FeatureVector& x);
StanceLabel predict(const StanceModel& model, const FeatureVector& x);

/// Versioned JSON model format; load rejects version mismatches and
/// corrupted files instead of mispredicting silently.
void save_model(const StanceModel& model, const std::filesystem::path& path);
StanceModel load_model(const std::filesystem::path& path);

}  // namespace stance
