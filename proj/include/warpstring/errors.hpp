#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpstring {

/// Syntax or lexical error in a profile expression; `offset` is the byte
/// position in the input where parsing failed.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t offset)
      : std::runtime_error(std::move(message)), offset(offset) {}
  std::size_t offset;
};

/// Evaluation outside the certified region, division by zero, a profile
/// that fails its positivity certificate, and similar analytic failures.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run configuration (missing keys, bad ranges, malformed file).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace warpstring
