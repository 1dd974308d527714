#include "stance/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "stance/util.hpp"

namespace stance {

const std::string& to_string(KernelKind kind) {
  static const std::array<std::string, 4> names = {"linear", "rbf", "polynomial", "sigmoid"};
  return names[static_cast<std::size_t>(kind)];
}

KernelKind parse_kernel(std::string_view text) {
  std::string lc = lowercase_ascii(text);
  if (lc == "linear") return KernelKind::Linear;
  if (lc == "rbf") return KernelKind::Rbf;
  if (lc == "polynomial" || lc == "poly") return KernelKind::Polynomial;
  if (lc == "sigmoid") return KernelKind::Sigmoid;
  throw std::runtime_error("unknown kernel: '" + std::string(text) + "'");
}

KernelSpec KernelSpec::resolved(std::size_t dimension) const {
  KernelSpec out = *this;
  if (out.gamma <= 0.0) {
    if (dimension == 0) throw std::runtime_error("cannot resolve gamma for dimension 0");
    out.gamma = 1.0 / static_cast<double>(dimension);
  }
  return out;
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::runtime_error("kernel_eval: dimension mismatch (" + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()) + ")");
  }
  if (spec.kind != KernelKind::Linear && spec.gamma <= 0.0) {
    throw std::runtime_error("kernel gamma must be positive (resolve 'auto' first)");
  }
  switch (spec.kind) {
    case KernelKind::Linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelKind::Rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = x[i] - y[i];
        d2 += d * d;
      }
      return std::exp(-spec.gamma * d2);
    }
    case KernelKind::Polynomial: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::pow(spec.gamma * dot + spec.coef0, spec.degree);
    }
    case KernelKind::Sigmoid: {
      double dot = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
      return std::tanh(spec.gamma * dot + spec.coef0);
    }
  }
  throw std::logic_error("unreachable");
}

std::map<StanceLabel, double> balanced_weights(const std::vector<StanceLabel>& labels) {
  std::map<StanceLabel, std::size_t> counts;
  for (StanceLabel l : labels) ++counts[l];
  std::map<StanceLabel, double> weights;
  const double n = static_cast<double>(labels.size());
  const double k = static_cast<double>(counts.size());
  for (const auto& [label, count] : counts) {
    weights[label] = n / (k * static_cast<double>(count));
  }
  return weights;
}

namespace {

/// Platt-style SMO over the soft-margin dual with per-sample boxes.
/// Decision convention: f(x) = sum_i alpha_i y_i K(x_i, x) + b.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
            std::vector<double> box, const KernelSpec& kernel, double tol, long stall_cap)
      : X_(X), y_(y), box_(std::move(box)), kernel_(kernel), tol_(tol), stall_cap_(stall_cap) {
    n_ = X_.size();
    alpha_.assign(n_, 0.0);
    errors_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) errors_[i] = -static_cast<double>(y_[i]);
    diag_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diag_[i] = kernel_eval(kernel_, X_[i], X_[i]);
    if (n_ <= kGramCacheLimit) {
      gram_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        gram_[i * n_ + i] = diag_[i];
        for (std::size_t j = i + 1; j < n_; ++j) {
          double v = kernel_eval(kernel_, X_[i], X_[j]);
          gram_[i * n_ + j] = v;
          gram_[j * n_ + i] = v;
        }
      }
    }
  }

  void run(SmoTrace* trace) {
    int num_changed = 0;
    bool examine_all = true;
    while (num_changed > 0 || examine_all) {
      num_changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || is_free(i)) num_changed += examine(i, trace);
      }
      ++sweeps_;
      if (stalled_) {
        warn("SMO stopped after " + std::to_string(stall_cap_) +
             " updates without dual progress (tolerance " + std::to_string(tol_) + ")");
        break;
      }
      if (examine_all) {
        examine_all = false;
      } else if (num_changed == 0) {
        examine_all = true;
      }
    }
    b_ = canonical_bias();
    if (trace) {
      trace->alphas = alpha_;
      trace->bias = b_;
      trace->updates = updates_;
      trace->sweeps = sweeps_;
      trace->hit_stall_cap = stalled_;
    }
  }

  double bias() const { return b_; }

  const std::vector<double>& alphas() const { return alpha_; }

  /// Canonical bias from the converged alphas: the midpoint of the interval
  /// the KKT conditions leave for b. With free support vectors the interval
  /// collapses; with every alpha at a bound it stays a genuine interval and
  /// the midpoint makes the model well-defined.
  double canonical_bias() const {
    double lo = -1e300, hi = 1e300;
    for (std::size_t i = 0; i < n_; ++i) {
      const double u = errors_[i] + y_[i] - b_;  // pre-bias output
      const double candidate = y_[i] - u;
      const double eps = 1e-10 * box_[i];
      const bool at_lower = alpha_[i] <= eps;
      const bool at_upper = alpha_[i] >= box_[i] - eps;
      if (!at_lower && !at_upper) {
        lo = std::max(lo, candidate);
        hi = std::min(hi, candidate);
      } else if ((y_[i] == 1 && at_lower) || (y_[i] == -1 && at_upper)) {
        lo = std::max(lo, candidate);
      } else {
        hi = std::min(hi, candidate);
      }
    }
    if (lo > hi) std::swap(lo, hi);
    if (lo < -1e299) return hi > 1e299 ? b_ : hi;
    if (hi > 1e299) return lo;
    return 0.5 * (lo + hi);
  }

 private:
  static constexpr std::size_t kGramCacheLimit = 3000;

  double kval(std::size_t i, std::size_t j) const {
    if (!gram_.empty()) return gram_[i * n_ + j];
    if (i == j) return diag_[i];
    return kernel_eval(kernel_, X_[i], X_[j]);
  }

  bool is_free(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < box_[i]; }

  int examine(std::size_t i2, SmoTrace* trace) {
    const double y2 = y_[i2];
    const double alph2 = alpha_[i2];
    const double e2 = errors_[i2];
    const double r2 = e2 * y2;
    const bool violates = (r2 < -tol_ && alph2 < box_[i2]) || (r2 > tol_ && alph2 > 0.0);
    if (!violates) return 0;

    // 1) the partner maximizing |E1 - E2| among free points
    std::size_t best = n_;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (!is_free(i)) continue;
      double gap = std::fabs(errors_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2, trace)) return 1;
    // 2) remaining free points, then 3) everything, from a rotating start
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t i1 = (i2 + 1 + k) % n_;
      if (is_free(i1) && take_step(i1, i2, trace)) return 1;
    }
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t i1 = (i2 + 1 + k) % n_;
      if (take_step(i1, i2, trace)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2, SmoTrace* trace) {
    if (i1 == i2) return false;
    const double alph1 = alpha_[i1], alph2 = alpha_[i2];
    const double y1 = y_[i1], y2 = y_[i2];
    const double e1 = errors_[i1], e2 = errors_[i2];
    const double s = y1 * y2;
    const double c1 = box_[i1], c2 = box_[i2];

    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, alph2 - alph1);
      hi = std::min(c2, c1 + alph2 - alph1);
    } else {
      lo = std::max(0.0, alph1 + alph2 - c1);
      hi = std::min(c2, alph1 + alph2);
    }
    if (hi - lo < 1e-12) return false;

    const double k11 = kval(i1, i1), k12 = kval(i1, i2), k22 = kval(i2, i2);
    const double eta = k11 + k22 - 2.0 * k12;  // curvature along the constraint line

    double a2;
    if (eta > 1e-12) {
      a2 = alph2 + y2 * (e1 - e2) / eta;
      a2 = std::clamp(a2, lo, hi);
    } else {
      // Flat or indefinite direction: move to the better endpoint of the
      // restricted objective (minimization form), or skip when equal. This
      // also covers duplicate points with opposite labels (eta == 0).
      const double g1 = y1 * (e1 - b_) - alph1 * k11 - s * alph2 * k12;
      const double g2 = y2 * (e2 - b_) - s * alph1 * k12 - alph2 * k22;
      const double l1 = alph1 + s * (alph2 - lo);
      const double h1 = alph1 + s * (alph2 - hi);
      const double obj_lo =
          l1 * g1 + lo * g2 + 0.5 * l1 * l1 * k11 + 0.5 * lo * lo * k22 + s * lo * l1 * k12;
      const double obj_hi =
          h1 * g1 + hi * g2 + 0.5 * h1 * h1 * k11 + 0.5 * hi * hi * k22 + s * hi * h1 * k12;
      if (obj_lo < obj_hi - 1e-12) {
        a2 = lo;
      } else if (obj_hi < obj_lo - 1e-12) {
        a2 = hi;
      } else {
        return false;
      }
    }
    if (std::fabs(a2 - alph2) < 1e-14 * (a2 + alph2 + 1e-14)) return false;

    double a1 = alph1 + s * (alph2 - a2);
    if (a1 < 0.0) a1 = 0.0;
    if (a1 > c1) a1 = c1;

    const double d1 = a1 - alph1, d2 = a2 - alph2;
    const double b1 = b_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
    const double b2 = b_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
    double new_b;
    if (a1 > 0.0 && a1 < c1) {
      new_b = b1;
    } else if (a2 > 0.0 && a2 < c2) {
      new_b = b2;
    } else {
      new_b = 0.5 * (b1 + b2);
    }

    // Dual progress for the stall guard (exact restricted-objective delta).
    const double g1 = y1 * (e1 - b_) - alph1 * k11 - s * alph2 * k12;
    const double g2 = y2 * (e2 - b_) - s * alph1 * k12 - alph2 * k22;
    auto restricted = [&](double x1, double x2) {
      return x1 * g1 + x2 * g2 + 0.5 * x1 * x1 * k11 + 0.5 * x2 * x2 * k22 + s * x1 * x2 * k12;
    };
    const double gain = restricted(alph1, alph2) - restricted(a1, a2);  // >= 0
    objective_ += gain;
    ++updates_;
    if (gain <= 1e-12 * (1.0 + std::fabs(objective_))) {
      if (++stall_counter_ >= stall_cap_) stalled_ = true;
    } else {
      stall_counter_ = 0;
    }

    const double delta_b = new_b - b_;
    for (std::size_t k = 0; k < n_; ++k) {
      errors_[k] += y1 * d1 * kval(i1, k) + y2 * d2 * kval(i2, k) + delta_b;
    }
    alpha_[i1] = a1;
    alpha_[i2] = a2;
    b_ = new_b;
    if (trace) trace->objective.push_back(objective_);
    return true;
  }

  const std::vector<std::vector<double>>& X_;
  const std::vector<int>& y_;
  std::vector<double> box_;
  KernelSpec kernel_;
  double tol_;
  long stall_cap_;

  std::size_t n_ = 0;
  std::vector<double> alpha_;
  std::vector<double> errors_;  // f(x_i) - y_i
  std::vector<double> diag_;
  std::vector<double> gram_;  // full cache for small problems
  double b_ = 0.0;
  double objective_ = 0.0;  // dual objective accumulated from update gains
  long updates_ = 0;
  int sweeps_ = 0;
  long stall_counter_ = 0;
  bool stalled_ = false;
};

}  // namespace

BinaryModel train_binary(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                         const TrainParams& params, double pos_weight, double neg_weight,
                         SmoTrace* trace) {
  if (X.empty() || X.size() != y.size()) {
    throw std::runtime_error("train_binary: X and y must be non-empty and the same length");
  }
  if (params.C <= 0.0) throw std::runtime_error("train_binary: C must be positive");
  if (params.tolerance <= 0.0) throw std::runtime_error("train_binary: tolerance must be positive");
  if (pos_weight <= 0.0 || neg_weight <= 0.0) {
    throw std::runtime_error("train_binary: class weights must be positive");
  }
  const std::size_t dim = X.front().size();
  bool has_pos = false, has_neg = false;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (X[i].size() != dim) throw std::runtime_error("train_binary: ragged feature matrix");
    for (double v : X[i]) {
      if (!std::isfinite(v)) throw std::runtime_error("train_binary: non-finite feature value");
    }
    if (y[i] == 1) {
      has_pos = true;
    } else if (y[i] == -1) {
      has_neg = true;
    } else {
      throw std::runtime_error("train_binary: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) {
    throw std::runtime_error("train_binary: both classes must be present");
  }

  KernelSpec kernel = params.kernel.resolved(dim);
  std::vector<double> box(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    box[i] = params.C * (y[i] == 1 ? pos_weight : neg_weight);
  }
  long stall_cap = static_cast<long>(std::max(1, params.max_passes)) * static_cast<long>(X.size());

  SmoSolver solver(X, y, std::move(box), kernel, params.tolerance, stall_cap);
  solver.run(trace);

  BinaryModel model;
  model.kernel = kernel;
  model.bias = solver.bias();
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (solver.alphas()[i] > 0.0) {
      model.support_vectors.push_back(X[i]);
      model.dual_coef.push_back(solver.alphas()[i] * y[i]);
    }
  }
  return model;
}

double decision_value(const BinaryModel& model, std::span<const double> x) {
  double sum = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
    sum += model.dual_coef[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
  }
  return sum;
}

StanceModel train_multiclass(const std::vector<FeatureVector>& X,
                             const std::vector<StanceLabel>& labels, const TrainParams& params,
                             const std::string& config_name, int workers) {
  if (X.empty() || X.size() != labels.size()) {
    throw std::runtime_error("train_multiclass: X and labels must be non-empty and equal length");
  }
  std::map<StanceLabel, std::size_t> counts;
  for (StanceLabel l : labels) ++counts[l];
  for (StanceLabel l : kAllLabels) {
    if (!counts.count(l)) {
      throw std::runtime_error("train_multiclass: class '" + to_string(l) +
                               "' has no training instances");
    }
  }
  if (params.class_weights) {
    for (StanceLabel l : kAllLabels) {
      if (!params.class_weights->count(l)) {
        throw std::runtime_error("train_multiclass: class_weights missing label '" + to_string(l) +
                                 "'");
      }
    }
  }

  StanceModel model;
  model.scaler = fit_scaler(X);
  model.config_name = config_name;
  model.schema = model.scaler.schema;
  model.C = params.C;
  model.tolerance = params.tolerance;
  model.class_weights = params.class_weights;

  std::vector<std::vector<double>> scaled(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) {
    scaled[i] = apply_scaler(model.scaler, X[i]).values;
  }

  std::vector<std::pair<StanceLabel, StanceLabel>> pairs;
  for (std::size_t a = 0; a < kNumLabels; ++a) {
    for (std::size_t b = a + 1; b < kNumLabels; ++b) {
      pairs.emplace_back(kAllLabels[a], kAllLabels[b]);
    }
  }

  auto weight_of = [&](StanceLabel l) {
    return params.class_weights ? params.class_weights->at(l) : 1.0;
  };

  model.models.resize(pairs.size());
  parallel_for(pairs.size(), workers, [&](std::size_t p) {
    auto [pos, neg] = pairs[p];
    std::vector<std::vector<double>> sub_x;
    std::vector<int> sub_y;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
      if (labels[i] == pos) {
        sub_x.push_back(scaled[i]);
        sub_y.push_back(1);
      } else if (labels[i] == neg) {
        sub_x.push_back(scaled[i]);
        sub_y.push_back(-1);
      }
    }
    BinaryModel bm = train_binary(sub_x, sub_y, params, weight_of(pos), weight_of(neg));
    bm.positive = pos;
    bm.negative = neg;
    model.models[p] = std::move(bm);
  });
  return model;
}

PredictionDetail predict_detail(const StanceModel& model, const FeatureVector& x) {
  FeatureVector scaled = apply_scaler(model.scaler, x);
  PredictionDetail out;
  for (const BinaryModel& bm : model.models) {
    double d = decision_value(bm, scaled.values);
    std::size_t pos = static_cast<std::size_t>(bm.positive);
    std::size_t neg = static_cast<std::size_t>(bm.negative);
    // d == 0 votes for the pair's first label; deterministic by construction.
    if (d >= 0.0) {
      ++out.votes[pos];
    } else {
      ++out.votes[neg];
    }
    out.score_sums[pos] += d;
    out.score_sums[neg] -= d;
  }
  int best_votes = -1;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    best_votes = std::max(best_votes, out.votes[l]);
  }
  std::size_t winner = kNumLabels;
  for (std::size_t l = 0; l < kNumLabels; ++l) {
    if (out.votes[l] != best_votes) continue;
    if (winner == kNumLabels || out.score_sums[l] > out.score_sums[winner]) winner = l;
  }
  out.label = kAllLabels[winner];
  return out;
}

StanceLabel predict(const StanceModel& model, const FeatureVector& x) {
  return predict_detail(model, x).label;
}

}  // namespace stance
