#pragma once

#include <stdexcept>
#include <string>

namespace sigca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A tail generator program exhausted its per-emit fuel budget.
class GeneratorStuck : public Error {
 public:
  using Error::Error;
};

/// Transition table is missing an entry, or a program breaks its region discipline.
class IllFormedMachine : public Error {
 public:
  using Error::Error;
};

class PatternWidth : public Error {
 public:
  using Error::Error;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

class TableTooLarge : public Error {
 public:
  using Error::Error;
};

/// Malformed structured-text input. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace sigca
