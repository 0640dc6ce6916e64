#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ambiact {

/// Base error for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the source name and 1-based line number
/// (0 when the failure is not tied to a line).
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& what)
      : Error(format(source, line, what)),
        source_(std::move(source)),
        line_(line),
        detail_(what) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& what) {
    std::string s = source.empty() ? std::string("<input>") : source;
    if (line > 0) s += ":" + std::to_string(line);
    return s + ": " + what;
  }

  std::string source_;
  std::size_t line_;
  std::string detail_;
};

}  // namespace ambiact
