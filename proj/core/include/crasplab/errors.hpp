#pragma once

#include <stdexcept>
#include <string>

namespace crasplab {

struct Diagnostic {
  int line = 0;    // 1-based; 0 when not tied to source text
  int column = 0;  // 1-based
  std::string message;

  std::string to_string() const;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two or more NEXT operations hold at the final position. Signals a buggy
// program, never a legal input condition.
class AmbiguousNextError : public Error {
 public:
  using Error::Error;
};

// generate() could produce more tokens than the step budget allows.
class StepBudgetError : public Error {
 public:
  using Error::Error;
};

// Input symbol outside the program's alphabet and the reserved specials.
class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

class InvalidInstanceError : public Error {
 public:
  using Error::Error;
};

class MalformedWordStringError : public Error {
 public:
  using Error::Error;
};

class InfeasibleSpecError : public Error {
 public:
  using Error::Error;
};

class NotExpressibleError : public Error {
 public:
  using Error::Error;
};

class DuplicatePredictionKeyError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace crasplab
