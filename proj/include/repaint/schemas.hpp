#pragma once

#include <string>
#include <vector>

#include "repaint/json_util.hpp"

namespace repaint {

// Structural validators for the MLLM response contracts. They return problem
// descriptions (empty = valid) so the repair loop can echo them back to the
// backend verbatim.
std::vector<std::string> check_iut_schema(const Json& j);
std::vector<std::string> check_feedback_schema(const Json& j);
std::vector<std::string> check_judge_schema(const Json& j);

// Dispatch by schema id; "freeform" accepts anything. Unknown ids raise
// ProtocolError.
std::vector<std::string> check_schema(const std::string& schema_id, const Json& j);

} // namespace repaint
