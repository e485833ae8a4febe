#include "contact/errors.hpp"

namespace contact {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

SyntaxError::SyntaxError(std::size_t position, std::string expected, const std::string& text)
    : Error("SyntaxError", "at position " + std::to_string(position) + ": expected " + expected +
                               " in '" + text + "'"),
      position_(position),
      expected_(std::move(expected)) {}

void fail(const std::string& kind, const std::string& message) { throw Error(kind, message); }

}  // namespace contact
