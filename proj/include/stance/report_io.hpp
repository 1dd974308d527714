#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "stance/eval.hpp"

namespace stance {

/// Machine-readable report schema. Volatile fields (wall-clock) are kept
/// out so identical runs produce byte-identical files.
nlohmann::json report_to_json(const EvalReport& report);
nlohmann::json ablation_to_json(const std::vector<AblationRow>& rows);
nlohmann::json grid_to_json(const GridResult& grid);

std::string report_to_text(const EvalReport& report);
std::string ablation_to_text(const std::vector<AblationRow>& rows);
std::string grid_to_text(const GridResult& grid);

void write_json_file(const nlohmann::json& j, const std::filesystem::path& path);

}  // namespace stance
