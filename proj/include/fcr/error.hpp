#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fcr {

/// Bad arguments or malformed input. The CLI maps this to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file content; carries the 1-based line number when known.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A configured size bound was exceeded. The CLI maps this to exit code 2.
class CapacityError : public std::runtime_error {
 public:
  CapacityError(const std::string& what, std::size_t reached)
      : std::runtime_error(what), reached_(reached) {}

  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

}  // namespace fcr
