#pragma once

#include <stdexcept>
#include <string>

namespace repaint {

// Error taxonomy shared across the library and mirrored by the C API codes.
enum class ErrorCode {
    Config = 1,
    Validation = 2,
    Io = 3,
    Manifest = 4,
    BackendUnavailable = 5,
    SchemaViolation = 6,
    Protocol = 7,
    DegenerateEmbedding = 8,
    DegenerateScene = 9,
    EmptyIteration = 10,
    Aggregate = 11,
    InsufficientData = 12,
    Build = 13,
    Encoding = 14,
    Run = 15,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

} // namespace repaint
