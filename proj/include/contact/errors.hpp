#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contact {

// Every failure raised by the library carries a short machine-readable kind
// ("DomainError", "NotContact", ...) next to the human message.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message);
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::string expected, const std::string& text);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

[[noreturn]] void fail(const std::string& kind, const std::string& message);

}  // namespace contact
