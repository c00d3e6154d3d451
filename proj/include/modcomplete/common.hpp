#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace modcomplete {

enum class Metaclass { Block, State, Signal };
enum class ClauseKind { Given, When, Then };

std::string_view to_string(Metaclass m);
std::string_view to_string(ClauseKind k);

// Accepts "Block", "block", "BLOCK", ...; throws std::invalid_argument otherwise.
Metaclass parse_metaclass(std::string_view text);

// Base of every error thrown by the library. `code()` is the stable error
// class name (e.g. "ValidationError", "MissingGiven") used in reports.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace modcomplete
