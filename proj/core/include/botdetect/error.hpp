#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace botdetect {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Parameters are well-formed but describe a model that cannot be realized,
/// e.g. a connection radius above 1/2 on the unit torus.
class InfeasibleParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input. Carries the 1-based line number of the offending line.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { kHeader, kMalformedLine, kVertexRange, kSelfLoop, kDuplicateEdge, kEdgeCount };

  ParseError(Kind kind, std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

/// Statistic is undefined for the given graph (no edges, no wedges, ...).
class UndefinedStatistic : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace botdetect
