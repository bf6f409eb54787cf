#include "eikonal/error.hpp"

namespace eik {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DegenerateGenerator: return "DegenerateGenerator";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::DegenerateManifold: return "DegenerateManifold";
    case ErrorCode::CausticPoint: return "CausticPoint";
    case ErrorCode::NonMonotone: return "NonMonotone";
    case ErrorCode::FlatDirection: return "FlatDirection";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t position, const std::string& message)
    : Error(ErrorCode::SyntaxError, "at position " + std::to_string(position) + ": " + message),
      position_(position) {}

UnknownSymbol::UnknownSymbol(std::size_t position, std::string symbol)
    : Error(ErrorCode::UnknownSymbol,
            "at position " + std::to_string(position) + ": unknown identifier '" + symbol + "'"),
      position_(position),
      symbol_(std::move(symbol)) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace eik
