#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "stance/svm.hpp"

namespace stance {

using nlohmann::json;

namespace {

constexpr int kModelVersion = 1;
constexpr const char* kModelFormat = "stance-model";

json kernel_to_json(const KernelSpec& k) {
  return json{{"kind", to_string(k.kind)},
              {"gamma", k.gamma},
              {"degree", k.degree},
              {"coef0", k.coef0}};
}

KernelSpec kernel_from_json(const json& j) {
  KernelSpec k;
  k.kind = parse_kernel(j.at("kind").get<std::string>());
  k.gamma = j.at("gamma").get<double>();
  k.degree = j.at("degree").get<int>();
  k.coef0 = j.at("coef0").get<double>();
  return k;
}

}  // namespace

void save_model(const StanceModel& model, const std::filesystem::path& path) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["config"] = model.config_name;
  j["schema"] = model.schema;
  j["scaler"] = {{"mean", model.scaler.mean}, {"stddev", model.scaler.stddev}};
  if (model.class_weights) {
    json w = json::object();
    for (const auto& [label, weight] : *model.class_weights) w[to_string(label)] = weight;
    j["class_weights"] = w;
  } else {
    j["class_weights"] = nullptr;
  }
  j["C"] = model.C;
  j["tolerance"] = model.tolerance;
  if (model.models.empty()) throw std::runtime_error("save_model: model has no binary classifiers");
  j["kernel"] = kernel_to_json(model.models.front().kernel);
  json models = json::array();
  for (const BinaryModel& bm : model.models) {
    models.push_back(json{{"positive", to_string(bm.positive)},
                          {"negative", to_string(bm.negative)},
                          {"bias", bm.bias},
                          {"dual_coef", bm.dual_coef},
                          {"support_vectors", bm.support_vectors}});
  }
  j["models"] = models;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out << j.dump() << "\n";
  if (!out) throw std::runtime_error("model write failed: " + path.string());
}

StanceModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt model file " + path.string() + ": " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw std::runtime_error("not a stance model file");
    }
    int version = j.at("version").get<int>();
    if (version != kModelVersion) {
      throw std::runtime_error("unsupported model version " + std::to_string(version) +
                               " (expected " + std::to_string(kModelVersion) + ")");
    }
    StanceModel model;
    model.config_name = j.at("config").get<std::string>();
    model.schema = j.at("schema").get<std::vector<std::string>>();
    model.scaler.schema = model.schema;
    model.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
    model.scaler.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
    if (model.scaler.mean.size() != model.schema.size() ||
        model.scaler.stddev.size() != model.schema.size()) {
      throw std::runtime_error("scaler size does not match schema");
    }
    model.C = j.at("C").get<double>();
    model.tolerance = j.at("tolerance").get<double>();
    if (!j.at("class_weights").is_null()) {
      std::map<StanceLabel, double> weights;
      for (auto it = j["class_weights"].begin(); it != j["class_weights"].end(); ++it) {
        weights[parse_label(it.key())] = it.value().get<double>();
      }
      model.class_weights = std::move(weights);
    }
    KernelSpec kernel = kernel_from_json(j.at("kernel"));
    for (const json& m : j.at("models")) {
      BinaryModel bm;
      bm.kernel = kernel;
      bm.positive = parse_label(m.at("positive").get<std::string>());
      bm.negative = parse_label(m.at("negative").get<std::string>());
      bm.bias = m.at("bias").get<double>();
      bm.dual_coef = m.at("dual_coef").get<std::vector<double>>();
      bm.support_vectors = m.at("support_vectors").get<std::vector<std::vector<double>>>();
      if (bm.dual_coef.size() != bm.support_vectors.size()) {
        throw std::runtime_error("dual_coef / support_vectors size mismatch");
      }
      for (const auto& sv : bm.support_vectors) {
        if (sv.size() != model.schema.size()) {
          throw std::runtime_error("support vector dimension does not match schema");
        }
      }
      model.models.push_back(std::move(bm));
    }
    if (model.models.size() != kNumLabels * (kNumLabels - 1) / 2) {
      throw std::runtime_error("expected " + std::to_string(kNumLabels * (kNumLabels - 1) / 2) +
                               " binary models, found " + std::to_string(model.models.size()));
    }
    return model;
  } catch (const json::exception& e) {
    throw std::runtime_error("corrupt model file " + path.string() + ": " + e.what());
  }
}

}  // namespace stance
