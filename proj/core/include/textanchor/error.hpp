#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace textanchor {

/// Base of every exception raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A value violates the documented invariant of the type or operation it was
/// passed to (degenerate box, probability outside (0,1), bad grid index...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Geometry read from a file is well-formed text but describes an impossible
/// shape (x_max <= x_min, negative size, non-convex quad).
class InvalidGeometry : public Error {
 public:
  InvalidGeometry(std::size_t line, const std::string& what)
      : Error(format(line, what)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(std::size_t line, const std::string& what) {
    return line == 0 ? what : "line " + std::to_string(line) + ": " + what;
  }

  std::size_t line_;
};

/// Text could not be tokenized into the expected fields. `field` is 1-based;
/// 0 means the problem is not tied to a single field.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t field, const std::string& what)
      : Error(format(line, field, what)), line_(line), field_(field) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t field() const noexcept { return field_; }

 private:
  static std::string format(std::size_t line, std::size_t field, const std::string& what) {
    std::string out;
    if (line != 0) out += "line " + std::to_string(line) + ": ";
    if (field != 0) out += "field " + std::to_string(field) + ": ";
    return out + what;
  }

  std::size_t line_;
  std::size_t field_;
};

}  // namespace textanchor
