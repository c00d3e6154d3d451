#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modcomplete/gherkin.hpp"
#include "modcomplete/kb.hpp"
#include "modcomplete/model.hpp"

namespace modcomplete {

struct Binding {
  std::string role;
  Metaclass metaclass;
  std::string phrase;  // requirement words, outer articles dropped
  std::string element;

  bool operator==(const Binding&) const = default;
};

// Bindings for one interpretation, in slot order (given, when, then; left to right).
using BindingSet = std::vector<Binding>;

// True when both sets bind the same roles to the same elements.
bool same_elements(const BindingSet& a, const BindingSet& b);

struct MatchResult {
  std::string requirement_id;
  std::string metareq_id;
  // One binding set per disjunctive when-branch; exactly one when conjunctive.
  std::vector<BindingSet> alternatives;
  std::size_t then_templates = 0;

  std::size_t alternatives_consumed() const { return alternatives.size(); }
  const BindingSet& bindings() const { return alternatives.front(); }
};

struct Diagnostic {
  std::string metareq_id;
  std::optional<ClauseKind> clause_kind;  // empty for shape mismatches
  std::size_t template_index = 0;
  std::string clause_text;
  std::string role;    // failing slot, if any
  std::string phrase;  // failing phrase(s), if any
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

struct MatchFailure {
  enum class Kind { NoMatch, AmbiguousMatch };

  Kind kind;
  std::string requirement_id;
  std::string metareq_id;  // the MetaReq with several readings (AmbiguousMatch only)
  std::vector<Diagnostic> diagnostics;
  // Distinct complete readings, each one binding set per when-branch.
  std::vector<std::vector<BindingSet>> readings;
};

std::string_view to_string(MatchFailure::Kind k);

using MatchOutcome = std::variant<MatchResult, MatchFailure>;

struct AmbiguousSpan {
  std::string role;
  Metaclass metaclass;
  std::string phrase;
  std::vector<std::string> candidates;

  bool operator==(const AmbiguousSpan&) const = default;
};

struct ClauseMatch {
  std::vector<BindingSet> bindings;      // distinct, every span resolved to one element
  std::vector<AmbiguousSpan> ambiguous;  // complete segmentations blocked by a multi-element span
};

// Every slot segmentation of `words` accepted by `tmpl`. State slots are
// looked up in `scope`'s machine when given, in every machine otherwise.
ClauseMatch match_clause(std::span<const Word> words, const ClauseTemplate& tmpl, const SystemModel& model,
                         std::optional<std::string_view> scope = std::nullopt);

// Tries MetaReqs in priority order. Adjacent clauses of one section may be
// re-joined (undoing an and-split) to fit a template. The first MetaReq with
// at least one complete reading wins; several distinct readings are an
// AmbiguousMatch.
MatchOutcome match_requirement(const RequirementAST& ast, const KnowledgeBase& kb, const SystemModel& model);

// Words of `clauses` joined back together, the splitting keywords restored.
std::vector<Word> join_clauses(std::span<const Clause> clauses);

// Candidate word lists for when-branch `index` of a disjunctive requirement:
// the branch itself, then the branch prefixed by 1..n-1 leading words of
// branch 0 ("A receives X or Y" reads Y as "A receives Y").
std::vector<std::vector<Word>> disjunct_readings(const std::vector<Clause>& when, std::size_t index);

// Words of a span with leading and trailing articles removed, space-joined.
std::string span_phrase(std::span<const Word> words);

}  // namespace modcomplete
