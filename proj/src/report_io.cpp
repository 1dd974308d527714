#include "stance/report_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace stance {

using nlohmann::json;

namespace {

json class_metrics_to_json(const ClassMetrics& m) {
  return json{{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

json matrix_to_json(const ConfusionMatrix& cm) {
  json rows = json::array();
  for (const auto& row : cm.counts) {
    json r = json::array();
    for (long v : row) r.push_back(v);
    rows.push_back(r);
  }
  return rows;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace

json report_to_json(const EvalReport& report) {
  json j;
  j["config"] = report.config_name;
  j["params"] = {{"C", report.C},
                 {"kernel", to_string(report.kernel.kind)},
                 {"gamma", report.kernel.gamma},
                 {"degree", report.kernel.degree},
                 {"coef0", report.kernel.coef0},
                 {"class_weighting", report.balanced_weights ? "balanced" : "none"}};
  if (report.seed) j["params"]["seed"] = *report.seed;
  j["accuracy"] = report.accuracy;
  j["macro"] = class_metrics_to_json(report.macro);
  json per_class = json::object();
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    per_class[to_string(kAllLabels[c])] = class_metrics_to_json(report.per_class[c]);
  }
  j["per_class"] = per_class;
  j["confusion"] = matrix_to_json(report.matrix);
  j["label_order"] = {"support", "deny", "query", "comment"};
  return j;
}

json ablation_to_json(const std::vector<AblationRow>& rows) {
  json out = json::array();
  for (const AblationRow& row : rows) {
    json r;
    r["set"] = row.config_name;
    if (row.skipped) {
      r["skipped"] = true;
      r["reason"] = row.skip_reason;
    } else {
      r["skipped"] = false;
      r["report"] = report_to_json(row.report);
    }
    out.push_back(r);
  }
  return json{{"ablation", out}};
}

json grid_to_json(const GridResult& grid) {
  json cells = json::array();
  for (const GridCell& cell : grid.cells) {
    json c;
    c["C"] = cell.C;
    c["kernel"] = to_string(cell.kernel);
    c["class_weighting"] = cell.balanced ? "balanced" : "none";
    if (cell.failed) {
      c["failed"] = true;
      c["error"] = cell.error;
    } else {
      c["failed"] = false;
      c["dev_accuracy"] = cell.dev_accuracy;
      c["dev_macro_f1"] = cell.dev_macro_f1;
    }
    cells.push_back(c);
  }
  json j;
  j["cells"] = cells;
  j["best_index"] = grid.best_index;
  j["best"] = {{"C", grid.best_params.C},
               {"kernel", to_string(grid.best_params.kernel.kind)},
               {"class_weighting", grid.best_params.class_weights ? "balanced" : "none"}};
  return j;
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream os;
  os << "config " << report.config_name << "  (C=" << report.C << ", kernel "
     << to_string(report.kernel.kind) << ", gamma " << report.kernel.gamma << ", weighting "
     << (report.balanced_weights ? "balanced" : "none") << ")\n";
  os << "accuracy " << fmt(report.accuracy) << "  macro P/R/F1 " << fmt(report.macro.precision)
     << "/" << fmt(report.macro.recall) << "/" << fmt(report.macro.f1) << "\n";
  os << "class      precision  recall     f1\n";
  for (std::size_t c = 0; c < kNumLabels; ++c) {
    const ClassMetrics& m = report.per_class[c];
    os << std::left << std::setw(10) << to_string(kAllLabels[c]) << " " << std::setw(10)
       << fmt(m.precision) << " " << std::setw(10) << fmt(m.recall) << " " << fmt(m.f1) << "\n";
  }
  os << "confusion (rows gold S,D,Q,C / columns predicted):\n";
  for (const auto& row : report.matrix.counts) {
    os << " ";
    for (long v : row) os << " " << std::setw(6) << v;
    os << "\n";
  }
  return os.str();
}

std::string ablation_to_text(const std::vector<AblationRow>& rows) {
  std::ostringstream os;
  os << "set  accuracy  macroP  macroR  macroF1\n";
  for (const AblationRow& row : rows) {
    if (row.skipped) {
      os << row.config_name << "    skipped: " << row.skip_reason << "\n";
      continue;
    }
    const EvalReport& r = row.report;
    os << std::left << std::setw(4) << row.config_name << " " << fmt(r.accuracy, 3) << "     "
       << fmt(r.macro.precision, 2) << "    " << fmt(r.macro.recall, 2) << "    "
       << fmt(r.macro.f1, 2) << "\n";
  }
  return os.str();
}

std::string grid_to_text(const GridResult& grid) {
  std::ostringstream os;
  os << "C        kernel      weighting  dev_accuracy  dev_macro_f1\n";
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const GridCell& cell = grid.cells[i];
    os << std::left << std::setw(8) << cell.C << " " << std::setw(11) << to_string(cell.kernel)
       << " " << std::setw(10) << (cell.balanced ? "balanced" : "none") << " ";
    if (cell.failed) {
      os << "FAILED: " << cell.error;
    } else {
      os << std::setw(13) << fmt(cell.dev_accuracy) << " " << fmt(cell.dev_macro_f1);
    }
    if (i == grid.best_index) os << "  <- best";
    os << "\n";
  }
  return os.str();
}

void write_json_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace stance
