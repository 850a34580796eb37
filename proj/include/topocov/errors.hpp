#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace topocov {

// Invalid model or operation parameters (p outside [0,1], n = 0, k out of range, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed edge-list or function-spec input. line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// Enumeration requested beyond the exhaustive-oracle limit.
class BudgetError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Poisson series refused for a function without a linear growth bound.
class SeriesRefusedError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Poisson series did not reach the tolerance within the term cap.
class SeriesTruncationError : public std::runtime_error {
public:
  SeriesTruncationError(const std::string& what, double last_term)
      : std::runtime_error(what), last_term_(last_term) {}

  double last_term() const noexcept { return last_term_; }

private:
  double last_term_;
};

} // namespace topocov
