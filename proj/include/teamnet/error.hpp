#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace teamnet {

enum class ErrorKind {
    MalformedRecord,
    MissingField,
    UnparseableTimestamp,
    UnknownRole,
    ConflictingRole,
    UnsortedInput,
    InvalidInput,
    CapacityViolation,
    DegenerateNetwork,
    AllZeroWeights,
    InfeasibleSpec,
    Io,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type. `line` is 1-based
// and 0 when the failure is not tied to a record in an input file.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::size_t line = 0);

    ErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    // The description without kind and line decoration.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
    std::size_t line_;
};

} // namespace teamnet
