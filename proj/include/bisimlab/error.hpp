#pragma once

#include <stdexcept>
#include <string>

namespace bisimlab {

/// Input that does not conform to a file format or to a system's alphabets.
class MalformedInput : public std::runtime_error {
 public:
  explicit MalformedInput(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + what : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A PCP instance or an index sequence violating its invariants.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search exceeded a configured node, memo or closure budget. Never a verdict.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A move rejected by the session machine; the message names the violated constraint.
class IllegalMove : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strategy was asked to act in a position it cannot handle.
class StrategyDefect : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bisimlab
