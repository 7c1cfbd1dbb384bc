#pragma once

#include <stdexcept>
#include <string>

namespace tgsketch {

// Bad input data or parameters. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text, reported with a line number.
class parse_error : public validation_error {
 public:
  parse_error(std::size_t line, const std::string& msg)
      : validation_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace tgsketch
