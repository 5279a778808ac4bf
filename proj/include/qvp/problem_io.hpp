#pragma once

#include <string>

#include "json.hpp"

#include "qvp/model.hpp"

namespace qvp {

/// Builds a problem from its JSON document and runs finalize_problem on it.
/// Malformed documents throw kParse; semantic problems throw kValidation or
/// kInfeasibleSet.
QvpProblem parse_problem(const nlohmann::json& doc);

QvpProblem load_problem(const std::string& path);

/// Serializes the problem back into the file format (bounds use null for
/// infinite entries).
nlohmann::json problem_to_json(const QvpProblem& problem);

}  // namespace qvp
