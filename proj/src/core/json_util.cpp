#include "repaint/json_util.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "repaint/errors.hpp"
#include "repaint/hash.hpp"

namespace repaint {

namespace {

void write_escaped_string(std::string& out, const std::string& s) {
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    static const char* digits = "0123456789abcdef";
                    out += "\\u00";
                    out.push_back(digits[c >> 4]);
                    out.push_back(digits[c & 0x0f]);
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

template <typename T>
void write_number(std::string& out, T value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) raise(ErrorCode::Encoding, "number formatting failed");
    out.append(buf, ptr);
}

void write_canonical(std::string& out, const Json& v) {
    switch (v.type()) {
        case Json::value_t::null:
            out += "null";
            break;
        case Json::value_t::boolean:
            out += v.get<bool>() ? "true" : "false";
            break;
        case Json::value_t::number_integer:
            write_number(out, v.get<std::int64_t>());
            break;
        case Json::value_t::number_unsigned:
            write_number(out, v.get<std::uint64_t>());
            break;
        case Json::value_t::number_float: {
            double d = v.get<double>();
            if (!std::isfinite(d)) raise(ErrorCode::Encoding, "non-finite number is not serializable");
            if (d == 0.0) d = 0.0; // normalize -0
            write_number(out, d);
            break;
        }
        case Json::value_t::string:
            write_escaped_string(out, v.get_ref<const std::string&>());
            break;
        case Json::value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : v) {
                if (!first) out.push_back(',');
                first = false;
                write_canonical(out, item);
            }
            out.push_back(']');
            break;
        }
        case Json::value_t::object: {
            // nlohmann objects are std::map-backed, so iteration order is
            // already lexicographic by key.
            out.push_back('{');
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out.push_back(',');
                first = false;
                write_escaped_string(out, it.key());
                out.push_back(':');
                write_canonical(out, it.value());
            }
            out.push_back('}');
            break;
        }
        default:
            raise(ErrorCode::Encoding, "value is not serializable as canonical JSON");
    }
}

} // namespace

std::string canonical_json(const Json& value) {
    std::string out;
    write_canonical(out, value);
    return out;
}

Json parse_json(std::string_view text) {
    Json parsed = Json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        raise(ErrorCode::Encoding, "malformed JSON");
    }
    return parsed;
}

std::string content_id(const Json& value) {
    return sha256_hex(canonical_json(value));
}

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Config: return "ConfigError";
        case ErrorCode::Validation: return "ValidationError";
        case ErrorCode::Io: return "IoError";
        case ErrorCode::Manifest: return "ManifestError";
        case ErrorCode::BackendUnavailable: return "BackendUnavailable";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::Protocol: return "ProtocolError";
        case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
        case ErrorCode::DegenerateScene: return "DegenerateScene";
        case ErrorCode::EmptyIteration: return "EmptyIteration";
        case ErrorCode::Aggregate: return "AggregateError";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::Build: return "BuildError";
        case ErrorCode::Encoding: return "EncodingError";
        case ErrorCode::Run: return "RunError";
    }
    return "Error";
}

} // namespace repaint
