#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace digitsvm {

// Malformed input file. line() is 1-based.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyImageError : public std::domain_error {
 public:
  EmptyImageError() : std::domain_error("empty image: no on-pixels") {}
};

class DimensionMismatch : public std::invalid_argument {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(actual)) {}
};

class MissingClassError : public std::invalid_argument {
 public:
  explicit MissingClassError(std::vector<int> classes)
      : std::invalid_argument(describe(classes)), classes_(std::move(classes)) {}

  const std::vector<int>& classes() const noexcept { return classes_; }

 private:
  static std::string describe(const std::vector<int>& classes) {
    std::string s = "missing class";
    s += classes.size() == 1 ? " " : "es ";
    for (std::size_t i = 0; i < classes.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(classes[i]);
    }
    return s;
  }

  std::vector<int> classes_;
};

}  // namespace digitsvm
