#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kelly {

// Violations of mathematical preconditions (bad market, undefined quantity, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative routine hit its iteration cap before reaching tolerance.
class ConvergenceError : public DomainError {
 public:
  explicit ConvergenceError(const std::string& msg) : DomainError(msg) {}
};

// A constraint set with empty feasible region.
class InfeasibleError : public DomainError {
 public:
  explicit InfeasibleError(const std::string& msg) : DomainError(msg) {}
};

// Malformed input file; line is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kelly
