#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "zigzag/height.hpp"
#include "zigzag/weierstrass.hpp"

namespace zz {

inline constexpr int kSchemaVersion = 1;

nlohmann::json record_to_json(const SolutionRecord& rec);
SolutionRecord record_from_json(const nlohmann::json& j);

/// Solution document: the record, a trace summary and, when given, the
/// Weierstrass constants.
nlohmann::json solution_document(const SolutionRecord& rec, const WeierstrassData* wd);
nlohmann::json partial_document(const Ladder& ladder);

void write_json(const std::string& path, const nlohmann::json& doc);
nlohmann::json read_json(const std::string& path);
SolutionRecord load_solution(const std::string& path);

void write_obj(std::ostream& out, const SurfaceMesh& mesh);
void write_obj(const std::string& path, const SurfaceMesh& mesh);

/// CSV with a header row; numbers at 17 significant digits.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<Real>>& rows);

}  // namespace zz
