#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "modcomplete/gherkin.hpp"
#include "modcomplete/model.hpp"

namespace modcomplete::testing {

inline std::string fixture_path(const std::string& name) { return std::string(MODCOMPLETE_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SystemModel railway_model() { return load_model(read_fixture("railway_model.json")); }

inline const char* kRailwayRequirement =
    "Given a Train in running, When the Braking Supervision receives an Emergency Stop Message, "
    "Then the Braking Supervision activates the Emergency Brake and goes in braking.";

inline RequirementDoc doc(std::string id, std::string text) {
  RequirementDoc d;
  d.id = std::move(id);
  d.text = std::move(text);
  return d;
}

}  // namespace modcomplete::testing
