#pragma once

#include <stdexcept>
#include <string>

namespace bnhard {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An exhaustive operation was asked to run above its configured bound.
class DeskScaleExceeded : public Error {
 public:
  using Error::Error;
};

// A bounded search ran out of budget before reaching its goal.
class SearchExhausted : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `line()` is 1-based; 0 means "no specific line".
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bnhard
