#pragma once

#include <optional>
#include <string>
#include <vector>

#include "modcomplete/matcher.hpp"
#include "modcomplete/model.hpp"

namespace modcomplete {

struct TraceBinding {
  std::string role;
  Metaclass metaclass;
  std::string element;

  bool operator==(const TraceBinding&) const = default;
};

// One <<satisfy>> dependency from a model element to the requirement.
struct SatisfyLink {
  std::string element;
  Metaclass metaclass;
  std::optional<std::string> scope;  // owning block, for states
  std::string stereotype = "satisfy";
  std::vector<std::string> roles;

  bool operator==(const SatisfyLink&) const = default;
};

struct TraceRecord {
  std::string requirement_id;
  std::string requirement_text;
  std::string metareq_id;
  std::string outcome;  // Added or Duplicate
  std::string owner;
  std::vector<TraceBinding> bindings;
  std::vector<std::string> generated;  // transition ids
  std::vector<SatisfyLink> satisfies;

  bool operator==(const TraceRecord&) const = default;
};

TraceRecord build_trace(const MatchResult& match, MergeOutcome outcome, const std::string& owner,
                        std::vector<std::string> transition_ids, std::string requirement_text);

// Canonical JSON array ordered by requirement id.
std::string emit_trace_json(std::vector<TraceRecord> records);

// PlantUML requirement diagram; nullopt when the record generated nothing.
std::optional<std::string> emit_requirement_diagram(const TraceRecord& record, const SystemModel& model);

std::string diagram_file_name(const std::string& requirement_id);

}  // namespace modcomplete
