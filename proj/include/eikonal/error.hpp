#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eik {

enum class ErrorCode {
  SyntaxError,
  UnknownSymbol,
  DomainError,
  QuadratureFailure,
  DegenerateGenerator,
  NoRoot,
  DegenerateManifold,
  CausticPoint,
  NonMonotone,
  FlatDirection,
  InvalidArgument,
};

/// Stable machine-readable name, e.g. "NoRoot".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; `position` is the 0-based byte offset into the source.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownSymbol : public Error {
 public:
  UnknownSymbol(std::size_t position, std::string symbol);

  std::size_t position() const noexcept { return position_; }
  const std::string& symbol() const noexcept { return symbol_; }

 private:
  std::size_t position_;
  std::string symbol_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace eik
