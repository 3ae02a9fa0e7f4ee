#pragma once

#include <stdexcept>
#include <string>

namespace lcr {

enum class ErrorKind {
    Schema,
    Parse,
    Validation,
    InsufficientData,
    DegeneratePredictor,
    DegenerateColumn,
    DegenerateSplit,
    Domain,
    SingularDesign,
    Config,
    Io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; `kind` lets callers map failures to exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace lcr
