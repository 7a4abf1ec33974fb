#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

namespace repaint {

using Json = nlohmann::json;

// Canonical serialization: object keys sorted lexicographically, no
// insignificant whitespace, UTF-8, numbers in shortest round-trip form.
// Semantically equal values produce byte-identical output; content hashes and
// cache keys are computed over these bytes.
std::string canonical_json(const Json& value);

// Parse with library exceptions mapped onto ErrorCode::Encoding.
Json parse_json(std::string_view text);

// sha256 of the canonical bytes; the project-wide content id.
std::string content_id(const Json& value);

} // namespace repaint
