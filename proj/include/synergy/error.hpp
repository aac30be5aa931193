// Exception hierarchy shared by the library and the command-line front end.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace synergy {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or flags supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Input data is inconsistent, malformed, or conditions on an impossible event.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A parse failure tied to a specific line of a text file (1-based).
class ParseError : public DataError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A requested computation exceeds a configured size cap.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace synergy
