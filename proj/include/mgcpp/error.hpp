#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mgcpp {

enum class ErrorKind {
    Parameter,
    Io,
    Parse,
    MalformedRow,
    Alignment,
    CrossedBook,
    InsufficientData,
    Instability,
    NoUniqueStationary,
    Ergodicity,
    InternalConsistency,
    Degenerate,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    // Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

}  // namespace mgcpp
