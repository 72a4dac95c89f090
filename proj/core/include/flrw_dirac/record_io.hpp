#pragma once

#include <string>

#include <json.hpp>

#include "flrw_dirac/solver.hpp"

namespace flrw {

/// Metadata plus scalar series; complex values as [re, im] pairs.
nlohmann::json record_to_json(const RunRecord& rec);
RunRecord record_from_json(const nlohmann::json& j);

void write_record(const std::string& path, const RunRecord& rec);
RunRecord read_record(const std::string& path);

}  // namespace flrw
