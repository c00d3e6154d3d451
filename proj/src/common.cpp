#include "modcomplete/common.hpp"

#include "modcomplete/normalize.hpp"

namespace modcomplete {

std::string_view to_string(Metaclass m) {
  switch (m) {
    case Metaclass::Block: return "Block";
    case Metaclass::State: return "State";
    case Metaclass::Signal: return "Signal";
  }
  return "?";
}

std::string_view to_string(ClauseKind k) {
  switch (k) {
    case ClauseKind::Given: return "given";
    case ClauseKind::When: return "when";
    case ClauseKind::Then: return "then";
  }
  return "?";
}

Metaclass parse_metaclass(std::string_view text) {
  std::string n = normalize_name(text);
  if (n == "block") return Metaclass::Block;
  if (n == "state") return Metaclass::State;
  if (n == "signal") return Metaclass::Signal;
  throw std::invalid_argument("unknown metaclass '" + std::string(text) + "'");
}

}  // namespace modcomplete
