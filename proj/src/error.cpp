#include "mgcpp/error.hpp"

namespace mgcpp {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parameter: return "parameter error";
        case ErrorKind::Io: return "i/o error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::MalformedRow: return "malformed row";
        case ErrorKind::Alignment: return "alignment error";
        case ErrorKind::CrossedBook: return "crossed book";
        case ErrorKind::InsufficientData: return "insufficient data";
        case ErrorKind::Instability: return "unstable process";
        case ErrorKind::NoUniqueStationary: return "no unique stationary distribution";
        case ErrorKind::Ergodicity: return "ergodicity violation";
        case ErrorKind::InternalConsistency: return "internal consistency error";
        case ErrorKind::Degenerate: return "degenerate input";
    }
    return "error";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

}  // namespace mgcpp
