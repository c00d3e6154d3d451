#pragma once

#include <string>
#include <vector>

#include "modcomplete/gherkin.hpp"
#include "modcomplete/kb.hpp"
#include "modcomplete/matcher.hpp"
#include "modcomplete/model.hpp"
#include "modcomplete/trace.hpp"

namespace modcomplete {

class GenerationError : public Error {
 public:
  enum class Kind { StateNotInOwnerMachine, OwnerHasNoStateMachine, MissingRole, InconsistentOwner };

  GenerationError(Kind kind, const std::string& message);
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct Warning {
  std::string requirement_id;
  std::string kind;  // "SignalNotReceivable"
  std::string message;

  bool operator==(const Warning&) const = default;
};

struct Instantiation {
  std::string owner;
  std::vector<Transition> transitions;  // one per when-branch, ids filled in
  std::vector<Warning> warnings;
};

Instantiation instantiate_fragment(const MetaFragment& fragment, const MatchResult& match, const SystemModel& model);

struct AddedEntry {
  std::string requirement_id;
  std::string owner;
  std::string transition_id;
};

struct DuplicateEntry {
  std::string requirement_id;
  std::string owner;
  std::string transition_id;
};

struct RightHandSide {
  std::string target;
  std::vector<SendEffect> effects;

  auto operator<=>(const RightHandSide&) const = default;
};

struct ConflictRecord {
  std::string owner;
  std::string source;
  std::optional<std::string> trigger;
  std::vector<RightHandSide> targets;         // >= 2, sorted
  std::vector<std::string> requirement_ids;   // sorted

  bool operator==(const ConflictRecord&) const = default;
};

struct UnmatchedEntry {
  std::string requirement_id;
  std::string error;  // error class, e.g. "NoMatch", "MissingThen"
  std::vector<std::string> diagnostics;
};

struct MatchSummary {
  std::string requirement_id;
  std::string metareq_id;
  std::size_t bindings = 0;
  std::size_t alternatives = 0;
  std::size_t then_templates = 0;
};

struct CompletionReport {
  std::vector<AddedEntry> added;
  std::vector<DuplicateEntry> duplicates;
  std::vector<ConflictRecord> conflicts;
  std::vector<UnmatchedEntry> unmatched;
  std::vector<Warning> warnings;
  std::vector<MatchSummary> matched;
};

struct Completion {
  SystemModel model;
  CompletionReport report;
  std::vector<TraceRecord> traces;
};

// Parse, match, instantiate and merge every requirement. Per-requirement
// failures are recorded in the report; transitions taking part in a conflict
// are withheld, whatever the corpus order.
Completion complete_model(const SystemModel& model, const std::vector<RequirementDoc>& corpus,
                          const KnowledgeBase& kb);

struct Finding {
  enum class Severity { Error, Warning, Info };

  Severity severity;
  std::string kind;  // Conflict, Redundancy, SignalNotReceivable, NonSingular, Unverifiable
  std::vector<std::string> requirement_ids;
  std::string message;
};

std::string_view to_string(Finding::Severity s);

std::vector<Finding> check_acceptability(const CompletionReport& report, const SystemModel& model);

std::string report_to_json(const CompletionReport& report, const std::vector<Finding>& findings);

}  // namespace modcomplete
