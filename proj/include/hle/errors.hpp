#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hle {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or usage: unknown column, out-of-range parameter,
// malformed duration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A malformed input row. Line numbers are 1-based and count the header.
class RowError : public Error {
 public:
  RowError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace hle
