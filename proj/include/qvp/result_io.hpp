#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "qvp/driver.hpp"

namespace qvp {

/// Result document. wall_time_s is the only field that varies between
/// identical runs.
nlohmann::json result_to_json(const SolveResult& result);

/// Inverse of result_to_json. Throws kParse.
SolveResult result_from_json(const nlohmann::json& doc);

void write_result(const SolveResult& result, const std::filesystem::path& path);

/// front.csv: one row per Y_WN entry, columns w_1..w_p, f_1..f_p, x_1..x_n.
void write_front_csv(const SolveResult& result, const std::filesystem::path& path);

/// vertices.csv: one row per V_eps vertex.
void write_vertices_csv(const SolveResult& result, const std::filesystem::path& path);

/// `epsilon=... scalarizations=... |Y_WN|=... |V_eps|=... gap=... time=...s`
std::string summary_line(const SolveResult& result);

}  // namespace qvp
