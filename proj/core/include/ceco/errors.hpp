#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ceco {

// Thrown when a simulated temperature leaves the physically meaningful band
// or a state update produces a non-finite value.
class ModelDivergenceError : public std::runtime_error {
 public:
  explicit ModelDivergenceError(const std::string& what)
      : std::runtime_error(what) {}
};

// Thrown by the NLP machinery when an objective or constraint evaluates to a
// non-finite value. Carries the offending point for diagnosis.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, std::vector<double> point)
      : std::runtime_error(what), point_(std::move(point)) {}

  const std::vector<double>& point() const noexcept { return point_; }

 private:
  std::vector<double> point_;
};

// File/format errors (drive cycles, traces, configs). line == 0 means the
// location is not line-addressable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string file, int line)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  int line() const noexcept { return line_; }

 private:
  std::string file_;
  int line_;
};

// Aggregated invariant violations; every offending field is listed so a bad
// config can be fixed in one pass.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "validation failed:";
    for (const auto& p : problems) {
      out += "\n  - " + p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace ceco
